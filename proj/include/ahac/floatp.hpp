#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Log-precision floats F_p (values m * 2^z with len(m), len(z) <= p/2) plus
// the exact rational arithmetic every oracle in this project is built on.

namespace ahac {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters, unrepresentable values, malformed specs. CLI maps this
// to exit code 2.
struct config_error : error {
    using error::error;
};

using Bit = std::uint8_t;
using BitVec = std::vector<std::uint8_t>;

// Largest natural number representable in p/2 bits: q = 2^(p/2-1) - 1.
std::int64_t q_of(int p);

// p must be even and >= 4 (F_0 is empty and odd p collapses to p-1).
void validate_precision(int p);

// Precision schedule p = ceil(c1 * log2 n) + c0, rounded up to a valid
// (even, >= 4) precision.
int scheduled_precision(std::int64_t n, double c0, double c1);

struct Params {
    std::int64_t n = 1;
    std::int64_t k = 1;
    int p = 6;
    std::optional<double> c0;
    std::optional<double> c1;

    std::int64_t q() const { return q_of(p); }
    // Throws config_error on violation; if a schedule is given, p is
    // recomputed from n and must match the stored p.
    void validate() const;
};

// Canonical log-precision float: value = sign * mant * 2^expo with
// mant in [0, q], expo in [-q, q].
//
// Canonical form: zero is (+, 0, 0); otherwise expo is the minimum value in
// [-q, q] such that |value| * 2^(-expo) is an integer <= q. This makes value
// equality coincide with bitwise equality of encodings.
struct FloatP {
    std::int8_t sign = +1; // +1 or -1
    std::int64_t mant = 0;
    std::int64_t expo = 0;

    bool is_zero() const { return mant == 0; }
    bool operator==(const FloatP&) const = default;
};

using FVec = std::vector<FloatP>;

Rat value(const FloatP& f);

// Three-way comparison by rational value.
int cmp(const FloatP& a, const FloatP& b);

FloatP neg(FloatP f);

// Truncation [[r]]_p: mirror negatives, clamp to q*2^q on overflow, otherwise
// mant = floor(r * 2^z) with z the largest integer in [-q, q] such that
// r * 2^z <= q. Total on Q; fixpoint on representable values.
FloatP truncate(const Rat& r, int p);

// Normalize (sign, M, E) with |M| <= q, |E| <= q into canonical form.
// Throws config_error if the preconditions are violated.
FloatP canonicalize(int sign, std::int64_t mant, std::int64_t expo, int p);

// Bit layout (p bits): bit 0 = mantissa sign (0 = +), bits 1..p/2-1 = mantissa
// magnitude LSB-first, bit p/2 = exponent sign, bits p/2+1..p-1 = |expo|
// LSB-first. Canonical zero is the all-zero string.
BitVec encode(const FloatP& f, int p);

// Strict inverse of encode: non-canonical bit patterns are rejected with
// config_error so circuit outputs are audited, never silently renormalized.
FloatP decode(const BitVec& bits, int p);

bool eq(const FloatP& a, const FloatP& b);

struct MaxResult {
    FloatP maxval;
    std::vector<std::int64_t> argmax; // 1-based indices, ascending
};

// Maximum by rational value together with the argmax set M(s).
MaxResult max_seq(const std::vector<FloatP>& s);

// sel(x, y): x if y = 1, else the all-zero vector.
FVec sel(const FVec& x, Bit y);

// Componentwise exact rational sum followed by ONE truncation.
// The empty sum is the zero vector of width k.
FVec sum_trunc(const std::vector<FVec>& xs, std::int64_t k, int p);

// Componentwise [[x_c / d]]_p from the exact rational quotient. d >= 1.
FVec div_trunc(const FVec& x, std::int64_t d, int p);

// All canonical F_p values, deterministic order (ascending by value).
std::vector<FloatP> enumerate_canonical(int p);

FloatP rand_canonical(int p, std::mt19937_64& rng);
FloatP rand_canonical(int p, std::uint64_t seed);

std::string to_string(const FloatP& f);
std::string to_string(const Rat& r);

// Parse "a/b" or integer or dyadic decimal ("-0.25") into an exact rational.
Rat parse_rational(const std::string& text);

} // namespace ahac
