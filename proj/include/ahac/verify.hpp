#pragma once

#include "ahac/head_compiler.hpp"

#include <functional>

// Equivalence verification (circuit vs exact-arithmetic oracle), growth
// measurement, and the end-to-end majority-language demo.

namespace ahac {

enum class VerifyMode { exhaustive, random };

struct Mismatch {
    BitVec input;
    BitVec got;  // circuit output
    BitVec want; // oracle output
};

struct VerifyReport {
    std::string target;
    std::map<std::string, std::string> config;
    std::uint64_t trials = 0;
    std::uint64_t mismatch_count = 0;
    std::vector<Mismatch> mismatches; // first 10, fully recorded
    double elapsed_s = 0;

    bool pass() const { return mismatch_count == 0; }
    std::string to_json() const;
};

// Batched circuit evaluation through the 64-lane packed evaluator.
std::vector<BitVec> eval_batch(const Circuit& c, const std::vector<BitVec>& inputs);

// Generic driver: run every input through the circuit and the oracle,
// collect mismatches (first 10 recorded in full).
VerifyReport run_verify(const std::string& target, const Circuit& c,
                        const std::vector<BitVec>& inputs,
                        const std::function<BitVec(const BitVec&)>& oracle,
                        std::map<std::string, std::string> config);

inline constexpr std::uint64_t kExhaustiveCap = std::uint64_t{1} << 20;

// All combinations of nf canonical floats, as concatenated encodings.
// Throws config_error if the combination count exceeds the cap.
std::vector<BitVec> enumerate_float_inputs(int p, std::size_t nf,
                                           std::uint64_t cap = kExhaustiveCap);
std::vector<BitVec> random_float_inputs(int p, std::size_t nf, std::uint64_t trials,
                                        std::uint64_t seed);
std::vector<BitVec> enumerate_raw_inputs(std::size_t width,
                                         std::uint64_t cap = kExhaustiveCap);
std::vector<BitVec> random_raw_inputs(std::size_t width, std::uint64_t trials,
                                      std::uint64_t seed);

VerifyReport verify_head(const HeadParams& hp, VerifyMode mode, std::uint64_t trials,
                         std::uint64_t seed);
VerifyReport verify_layer(const Params& base, const LayerSpec& layer, VerifyMode mode,
                          std::uint64_t trials, std::uint64_t seed,
                          std::int64_t ncap = -1);
VerifyReport verify_transformer(const Params& base, const ModelSpec& model,
                                VerifyMode mode, std::uint64_t trials,
                                std::uint64_t seed, std::int64_t ncap = -1);

// Sizing knobs for single-operation verification.
struct OpConfig {
    std::int64_t n = 2;
    std::int64_t k = 1;
    int p = 4;
    std::int64_t nmax = 4;  // div divisor range
    std::int64_t rows = 3;  // itadd
    int width = 4;          // itadd / add2 / sub2 / cmp
    ScoreSpec spec;         // score
    VerifyMode mode = VerifyMode::exhaustive;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
};

// name: sum, div, eq, sel, max, score, itadd, add2, sub2, cmp, threshold, count.
VerifyReport verify_op(const std::string& name, const OpConfig& cfg);

struct GrowthRow {
    std::int64_t n = 0;
    int p = 0;
    std::uint64_t size = 0;
    std::size_t depth = 0;
    std::vector<StageInfo> stages; // whole-circuit per-stage gate totals
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    std::vector<Rat> poly;    // interpolated on the first 4 rows, degree <= 3
    bool exact_fit = false;   // polynomial reproduces every remaining row
    std::string csv() const;  // schema-stable, header pinned by tests
};

// Plans compile_head for n in [n_from, n_to]; needs at least 5 points.
// When c0/c1 are set on base, p follows the schedule per n.
GrowthReport growth_stats(const HeadParams& base, std::int64_t n_from,
                          std::int64_t n_to);

struct DemoRow {
    std::int64_t n = 0;
    std::uint64_t words = 0;
    std::uint64_t circuit_ref_mismatches = 0;
    std::uint64_t ref_majority_agree = 0; // informational
};

struct DemoReport {
    int p = 0;
    std::vector<DemoRow> rows;
    bool all_match = false; // circuit == transformer_ref everywhere
    std::string to_json() const;
};

DemoReport demo_majority(std::int64_t n_max, int p);

} // namespace ahac
