#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahac/floatp.hpp"

#include <map>
#include <set>

using namespace ahac;

TEST_CASE("q and precision validation") {
    CHECK(q_of(4) == 1);
    CHECK(q_of(6) == 3);
    CHECK(q_of(8) == 7);
    CHECK_THROWS_AS(validate_precision(7), config_error);
    CHECK_THROWS_AS(validate_precision(2), config_error);
    CHECK_THROWS_AS(validate_precision(0), config_error);
}

TEST_CASE("precision schedule") {
    CHECK(scheduled_precision(4, 2.0, 2.0) == 6);
    CHECK(scheduled_precision(8, 2.0, 2.0) == 8);
    CHECK(scheduled_precision(16, 2.0, 2.0) == 10);
    Params pr;
    pr.n = 8;
    pr.k = 1;
    pr.p = 8;
    pr.c0 = 2.0;
    pr.c1 = 2.0;
    CHECK_NOTHROW(pr.validate());
    pr.p = 6; // schedule says 8
    CHECK_THROWS_AS(pr.validate(), config_error);
}

TEST_CASE("truncation worked example and basic cases") {
    // p=6 (q=3): 5/16 = 0.0101b truncates to 0.01b = 1/4, canonical (+,2,-3)
    FloatP f = truncate(Rat(5, 16), 6);
    CHECK(f.sign == +1);
    CHECK(f.mant == 2);
    CHECK(f.expo == -3);
    CHECK(value(f) == Rat(1, 4));

    CHECK(truncate(Rat(0), 6) == FloatP{+1, 0, 0});
    CHECK(value(truncate(Rat(25), 6)) == Rat(24)); // clamp to q*2^q = 24
    CHECK(value(truncate(Rat(31, 10), 6)) == Rat(2));
}

TEST_CASE("documented non-monotonicity pin at p=6") {
    CHECK(value(truncate(Rat(3), 6)) == Rat(3));
    CHECK(value(truncate(Rat(31, 10), 6)) == Rat(2));
}

TEST_CASE("canonicalize") {
    CHECK(canonicalize(+1, 1, 1, 6) == FloatP{+1, 2, 0});
    CHECK(canonicalize(+1, 0, 3, 6) == FloatP{+1, 0, 0});
    CHECK(canonicalize(+1, 3, -3, 6) == FloatP{+1, 3, -3});
    CHECK_THROWS_AS(canonicalize(+1, 4, 0, 6), config_error); // M > q
}

TEST_CASE("encode/decode layout") {
    CHECK(encode(FloatP{+1, 0, 0}, 6) == BitVec{0, 0, 0, 0, 0, 0});
    CHECK(encode(FloatP{+1, 3, 0}, 6) == BitVec{0, 1, 1, 0, 0, 0});
    CHECK(encode(FloatP{-1, 2, -3}, 6) == BitVec{1, 0, 1, 1, 1, 1});
    CHECK(decode(BitVec{0, 1, 1, 0, 0, 0}, 6) == FloatP{+1, 3, 0});
    // negative zero mantissa is non-canonical
    CHECK_THROWS_AS(decode(BitVec{1, 0, 0, 0, 0, 0}, 6), config_error);
    // non-minimal exponent (1*2^1 should be 2*2^0)
    CHECK_THROWS_AS(decode(BitVec{0, 1, 0, 0, 1, 0}, 6), config_error);
    // negative exponent sign with zero magnitude
    CHECK_THROWS_AS(decode(BitVec{0, 1, 1, 1, 0, 0}, 6), config_error);
}

TEST_CASE("eq matches rational equality and bitwise encodings") {
    FloatP two = truncate(Rat(2), 6);
    CHECK(eq(two, two));
    CHECK_FALSE(eq(two, neg(two)));
    CHECK(eq(decode(BitVec{0, 1, 1, 0, 0, 0}, 6), canonicalize(+1, 3, 0, 6)));
}

TEST_CASE("max_seq") {
    auto f = [](std::int64_t v) { return truncate(Rat(v), 6); };
    MaxResult m = max_seq({f(1), f(3), f(3)});
    CHECK(value(m.maxval) == Rat(3));
    CHECK(m.argmax == std::vector<std::int64_t>{2, 3});
    m = max_seq({truncate(Rat(-1), 6)});
    CHECK(value(m.maxval) == Rat(-1));
    CHECK(m.argmax == std::vector<std::int64_t>{1});
    m = max_seq({truncate(Rat(1, 4), 6), truncate(Rat(1, 2), 6), truncate(Rat(-2), 6)});
    CHECK(value(m.maxval) == Rat(1, 2));
    CHECK(m.argmax == std::vector<std::int64_t>{2});
    CHECK_THROWS_AS(max_seq({}), config_error);
}

TEST_CASE("sel") {
    FVec x = {truncate(Rat(3), 6), truncate(Rat(-1), 6)};
    CHECK(sel(x, 1) == x);
    FVec z = sel(x, 0);
    CHECK(z == FVec{FloatP{+1, 0, 0}, FloatP{+1, 0, 0}});
}

TEST_CASE("sum_trunc and div_trunc examples") {
    auto f = [](std::int64_t v) { return truncate(Rat(v), 6); };
    CHECK(value(sum_trunc({{f(2)}, {f(2)}}, 1, 6)[0]) == Rat(4));
    CHECK(value(sum_trunc({{f(3)}, {f(3)}, {f(3)}}, 1, 6)[0]) == Rat(8));
    CHECK(sum_trunc({}, 2, 6) == FVec{FloatP{+1, 0, 0}, FloatP{+1, 0, 0}});
    CHECK(value(div_trunc({f(3)}, 2, 6)[0]) == Rat(3, 2));
    CHECK(value(div_trunc({f(1)}, 3, 6)[0]) == Rat(1, 4));
    CHECK(div_trunc({f(0), f(0)}, 5, 6) == FVec{FloatP{+1, 0, 0}, FloatP{+1, 0, 0}});
    CHECK_THROWS_AS(div_trunc({f(1)}, 0, 6), config_error);
}

TEST_CASE("fixpoint: truncation is identity on canonical values") {
    for (int p : {4, 6, 8})
        for (const FloatP& v : enumerate_canonical(p))
            CHECK(truncate(value(v), p) == v);
}

TEST_CASE("idempotence, odd symmetry, bounding on random rationals") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 10000; ++iter) {
        int p = (iter % 3) * 2 + 4;
        std::int64_t num = static_cast<std::int64_t>(rng() % 4000) - 2000;
        std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 500);
        Rat r(num, den);
        FloatP t = truncate(r, p);
        CHECK(truncate(value(t), p) == t);
        CHECK(truncate(-r, p) == neg(t));
        if (r >= 0) {
            CHECK(value(t) >= 0);
            CHECK(value(t) <= r);
        }
    }
}

TEST_CASE("encode/decode round trip and injectivity, exhaustive") {
    for (int p : {4, 6, 8}) {
        std::set<BitVec> seen;
        std::set<Rat> values;
        for (const FloatP& v : enumerate_canonical(p)) {
            BitVec b = encode(v, p);
            CHECK(decode(b, p) == v);
            CHECK(seen.insert(b).second);
            CHECK(values.insert(value(v)).second);
        }
    }
}

TEST_CASE("enumerate_canonical p=4 is the 7-value domain") {
    std::vector<Rat> vals;
    for (const FloatP& v : enumerate_canonical(4)) vals.push_back(value(v));
    std::vector<Rat> expect{Rat(-2), Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1), Rat(2)};
    CHECK(vals == expect);
}

TEST_CASE("sum/div agree with independent brute-force rational evaluation") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 10000; ++iter) {
        int p = (iter & 1) ? 6 : 8;
        std::size_t n = 1 + rng() % 5;
        std::vector<FVec> xs;
        Rat total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            FloatP f = rand_canonical(p, rng);
            xs.push_back({f});
            total += value(f);
        }
        CHECK(sum_trunc(xs, 1, p)[0] == truncate(total, p));
        std::int64_t d = 1 + static_cast<std::int64_t>(rng() % 6);
        FloatP x = rand_canonical(p, rng);
        CHECK(div_trunc({x}, d, p)[0] == truncate(value(x) / d, p));
    }
}

TEST_CASE("rand_canonical determinism and coverage") {
    CHECK(rand_canonical(6, std::uint64_t{42}) == rand_canonical(6, std::uint64_t{42}));
    std::mt19937_64 rng(3);
    std::map<Rat, int> hist;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++hist[value(rand_canonical(4, rng))];
    CHECK(hist.size() == 7);
    // crude uniformity: each value within 10% of the expected share
    for (const auto& [v, c] : hist) {
        CHECK(c > draws / 7 * 0.9);
        CHECK(c < draws / 7 * 1.1);
    }
}

TEST_CASE("parse_rational") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-7") == Rat(-7));
    CHECK(parse_rational("-0.25") == Rat(-1, 4));
    CHECK_THROWS_AS(parse_rational("x"), config_error);
}
