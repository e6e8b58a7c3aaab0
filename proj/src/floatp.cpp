#include "ahac/floatp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace ahac {

namespace {

Int pow2(std::int64_t e) {
    Int r = 1;
    return r << e;
}

// r * 2^z as an exact rational, z may be negative.
Rat scale2(const Rat& r, std::int64_t z) {
    if (z >= 0) return r * Rat(pow2(z));
    return r / Rat(pow2(-z));
}

Int floor_rat(const Rat& r) {
    // Exact floor; cpp_rational keeps denominator positive.
    Int n = numerator(r);
    Int d = denominator(r);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

} // namespace

void validate_precision(int p) {
    if (p < 4 || p % 2 != 0)
        throw config_error("precision p must be even and >= 4, got " + std::to_string(p));
    if (p > 62)
        throw config_error("precision p too large for this implementation: " + std::to_string(p));
}

std::int64_t q_of(int p) {
    validate_precision(p);
    return (std::int64_t{1} << (p / 2 - 1)) - 1;
}

int scheduled_precision(std::int64_t n, double c0, double c1) {
    if (n < 1) throw config_error("schedule requires n >= 1");
    if (c0 < 0 || c1 < 0) throw config_error("schedule constants must be non-negative");
    int p = static_cast<int>(std::ceil(c1 * std::log2(static_cast<double>(n)))) +
            static_cast<int>(c0);
    if (p < 4) p = 4;
    p += p & 1; // the encoding splits p evenly, so round odd schedules up
    validate_precision(p);
    return p;
}

void Params::validate() const {
    if (n < 1) throw config_error("n must be positive");
    if (k < 1) throw config_error("k must be positive");
    validate_precision(p);
    if (c0.has_value() != c1.has_value())
        throw config_error("schedule requires both c0 and c1");
    if (c0) {
        int sched = scheduled_precision(n, *c0, *c1);
        if (sched != p)
            throw config_error("stored p=" + std::to_string(p) +
                               " does not match schedule p=" + std::to_string(sched));
    }
}

Rat value(const FloatP& f) {
    Rat m(f.mant);
    if (f.sign < 0) m = -m;
    return scale2(m, f.expo);
}

int cmp(const FloatP& a, const FloatP& b) {
    Rat va = value(a), vb = value(b);
    if (va < vb) return -1;
    if (va > vb) return 1;
    return 0;
}

FloatP neg(FloatP f) {
    if (!f.is_zero()) f.sign = -f.sign;
    return f;
}

FloatP canonicalize(int sign, std::int64_t mant, std::int64_t expo, int p) {
    std::int64_t q = q_of(p);
    if (mant < 0) {
        sign = -sign;
        mant = -mant;
    }
    if (mant > q) throw config_error("canonicalize: |mantissa| exceeds q");
    if (expo < -q || expo > q) throw config_error("canonicalize: |exponent| exceeds q");
    if (mant == 0) return FloatP{+1, 0, 0};
    while (2 * mant <= q && expo > -q) {
        mant *= 2;
        --expo;
    }
    return FloatP{static_cast<std::int8_t>(sign >= 0 ? +1 : -1), mant, expo};
}

FloatP truncate(const Rat& r, int p) {
    std::int64_t q = q_of(p);
    if (r < 0) return neg(truncate(-r, p));
    if (r == 0) return FloatP{+1, 0, 0};
    Rat clamp = scale2(Rat(q), q);
    if (r > clamp) return FloatP{+1, q, q};
    // Largest z in [-q, q] with r * 2^z <= q; monotone, so binary search.
    // z = -q always qualifies here because r <= q * 2^q.
    std::int64_t lo = -q, hi = q;
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo + 1) / 2;
        if (scale2(r, mid) <= q)
            lo = mid;
        else
            hi = mid - 1;
    }
    Int m = floor_rat(scale2(r, lo));
    return canonicalize(+1, static_cast<std::int64_t>(m), -lo, p);
}

BitVec encode(const FloatP& f, int p) {
    std::int64_t q = q_of(p);
    if (f.mant < 0 || f.mant > q || f.expo < -q || f.expo > q)
        throw config_error("encode: value out of range for p");
    int half = p / 2;
    BitVec bits(p, 0);
    bits[0] = f.sign < 0 ? 1 : 0;
    for (int t = 0; t < half - 1; ++t)
        bits[1 + t] = static_cast<Bit>((f.mant >> t) & 1);
    std::int64_t emag = f.expo < 0 ? -f.expo : f.expo;
    bits[half] = f.expo < 0 ? 1 : 0;
    for (int t = 0; t < half - 1; ++t)
        bits[half + 1 + t] = static_cast<Bit>((emag >> t) & 1);
    return bits;
}

FloatP decode(const BitVec& bits, int p) {
    std::int64_t q = q_of(p);
    int half = p / 2;
    if (static_cast<int>(bits.size()) != p)
        throw config_error("decode: expected " + std::to_string(p) + " bits, got " +
                           std::to_string(bits.size()));
    for (Bit b : bits)
        if (b != 0 && b != 1) throw config_error("decode: non-binary bit value");
    std::int64_t mant = 0, emag = 0;
    for (int t = 0; t < half - 1; ++t) {
        mant |= static_cast<std::int64_t>(bits[1 + t]) << t;
        emag |= static_cast<std::int64_t>(bits[half + 1 + t]) << t;
    }
    bool msign = bits[0] != 0;
    bool esign = bits[half] != 0;
    if (mant == 0) {
        if (msign || esign || emag != 0)
            throw config_error("decode: non-canonical zero encoding");
        return FloatP{+1, 0, 0};
    }
    if (esign && emag == 0) throw config_error("decode: negative-zero exponent");
    std::int64_t expo = esign ? -emag : emag;
    if (2 * mant <= q && expo > -q)
        throw config_error("decode: non-canonical mantissa (exponent not minimal)");
    return FloatP{static_cast<std::int8_t>(msign ? -1 : +1), mant, expo};
}

bool eq(const FloatP& a, const FloatP& b) {
    return a == b;
}

MaxResult max_seq(const std::vector<FloatP>& s) {
    if (s.empty()) throw config_error("max_seq: empty input");
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (cmp(s[i], s[best]) > 0) best = i;
    MaxResult res;
    res.maxval = s[best];
    for (std::size_t i = 0; i < s.size(); ++i)
        if (cmp(s[i], res.maxval) == 0)
            res.argmax.push_back(static_cast<std::int64_t>(i) + 1);
    return res;
}

FVec sel(const FVec& x, Bit y) {
    if (y) return x;
    return FVec(x.size(), FloatP{+1, 0, 0});
}

FVec sum_trunc(const std::vector<FVec>& xs, std::int64_t k, int p) {
    validate_precision(p);
    for (const FVec& v : xs)
        if (static_cast<std::int64_t>(v.size()) != k)
            throw config_error("sum_trunc: vector width mismatch");
    FVec out(static_cast<std::size_t>(k));
    for (std::int64_t c = 0; c < k; ++c) {
        Rat acc = 0;
        for (const FVec& v : xs) acc += value(v[static_cast<std::size_t>(c)]);
        out[static_cast<std::size_t>(c)] = truncate(acc, p);
    }
    return out;
}

FVec div_trunc(const FVec& x, std::int64_t d, int p) {
    if (d < 1) throw config_error("div_trunc: divisor must be >= 1");
    FVec out(x.size());
    for (std::size_t c = 0; c < x.size(); ++c)
        out[c] = truncate(value(x[c]) / Rat(d), p);
    return out;
}

std::vector<FloatP> enumerate_canonical(int p) {
    std::int64_t q = q_of(p);
    std::vector<FloatP> all;
    all.push_back(FloatP{+1, 0, 0});
    for (std::int64_t m = 1; m <= q; ++m)
        for (std::int64_t e = -q; e <= q; ++e) {
            if (2 * m <= q && e > -q) continue; // not canonical
            all.push_back(FloatP{+1, m, e});
            all.push_back(FloatP{-1, m, e});
        }
    std::sort(all.begin(), all.end(),
              [](const FloatP& a, const FloatP& b) { return value(a) < value(b); });
    return all;
}

FloatP rand_canonical(int p, std::mt19937_64& rng) {
    thread_local std::map<int, std::vector<FloatP>> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, enumerate_canonical(p)).first;
    const std::vector<FloatP>& dom = it->second;
    std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
    return dom[pick(rng)];
}

FloatP rand_canonical(int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return rand_canonical(p, rng);
}

std::string to_string(const FloatP& f) {
    std::ostringstream os;
    os << (f.sign < 0 ? "-" : "+") << f.mant << "*2^" << f.expo;
    return os.str();
}

std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

Rat parse_rational(const std::string& text) {
    std::string t = text;
    if (t.empty()) throw config_error("empty rational literal");
    auto slash = t.find('/');
    try {
        if (slash != std::string::npos) {
            Int num(t.substr(0, slash));
            Int den(t.substr(slash + 1));
            if (den == 0) throw config_error("zero denominator: " + text);
            return Rat(num, den);
        }
        auto dot = t.find('.');
        if (dot == std::string::npos) return Rat(Int(t));
        std::string whole = t.substr(0, dot);
        std::string frac = t.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole == "-" || whole.empty()) whole = negative ? "-0" : "0";
        Int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Int digits = frac.empty() ? Int(0) : Int(frac);
        Rat r = Rat(Int(whole)) + (negative ? -Rat(digits, scale) : Rat(digits, scale));
        return r;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        throw config_error("malformed rational literal: " + text);
    }
}

} // namespace ahac
