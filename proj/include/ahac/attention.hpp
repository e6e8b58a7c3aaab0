#pragma once

#include "ahac/floatp.hpp"

#include <string>
#include <vector>

// Exact reference semantics for average-hard attention: scoring, the xi
// distribution, heads, layers, positional encodings and whole toy
// transformers. Every generated circuit is verified against this module.

namespace ahac {

// Deterministic bit-level function with explicit widths; evaluator is an
// explicit row table so it can double as a circuit-compilation source.
struct TruthTable {
    int in_width = 0;
    int out_width = 0;
    std::vector<BitVec> rows; // 2^in_width rows, input index LSB-first

    void validate() const;
    const BitVec& apply(const BitVec& in) const;
};

struct ScoreSpec {
    enum class Kind { dot, bilinear, table };
    Kind kind = Kind::dot;
    // bilinear: score(x, x') = [[ (Qx) . (Kx') ]]_p with exact intermediates.
    std::vector<std::vector<std::int64_t>> Q, K; // k x k integer matrices
    TruthTable table; // table kind: 2*k*p input bits -> p output bits

    void validate(std::int64_t k, int p) const;
    std::string describe() const;
};

// Reference scoring: exact rational inner products, ONE final truncation.
FloatP score(const ScoreSpec& spec, const FVec& x, const FVec& xp, int p);

// Average-hard attention distribution: 1/|M(s)| on the argmax set, 0 off it.
std::vector<Rat> xi(const std::vector<FloatP>& s);

enum class HeadMode {
    two_trunc, // div_trunc(sum_trunc(...)) -- circuit-matching composition
    one_trunc, // single truncation of (1/|M|) * sum -- literal simplified form
};

std::vector<FVec> head_ref(const std::vector<FVec>& X, const ScoreSpec& spec, int p,
                           HeadMode mode = HeadMode::two_trunc);

struct FfnSpec {
    enum class Kind { table, comparator };
    Kind kind = Kind::comparator;
    TruthTable table; // (h*k)*p bits -> k*p bits
    // comparator: value(concat[lhs]) > value(concat[rhs]) ? out_gt : out_le
    std::int64_t lhs = 0, rhs = 1;
    FVec out_gt, out_le; // width k

    void validate(std::int64_t h, std::int64_t k, int p) const;
};

struct LayerSpec {
    std::vector<ScoreSpec> heads;
    FfnSpec ffn;

    void validate(std::int64_t k, int p) const;
};

std::vector<FVec> layer_ref(const std::vector<FVec>& X, const LayerSpec& layer,
                            std::int64_t k, int p);

struct ModelSpec {
    enum class Embedding { binary, onehot, symtable };
    std::vector<std::string> alphabet; // single-character symbols
    std::int64_t k = 2;
    Embedding embedding = Embedding::symtable;
    std::vector<FVec> symtable; // per symbol, width k (symtable embedding)
    std::vector<LayerSpec> layers;
    std::int64_t readout_component = 0; // accept iff its value at position 1 is > 0

    void validate(std::int64_t n, int p) const;
    std::vector<int> symbol_indices(const std::string& word) const; // 0-based
};

// enc(a_i, j) per variant, every component truncated into F_p. Positions and
// symbol indices are 1-based as in the positional-encoding definitions.
FVec embed_symbol(const ModelSpec& model, int sym_index0, std::int64_t pos1, int p);

std::vector<FVec> encode_input(const std::string& word, const ModelSpec& model,
                               std::int64_t n, int p);

// encode_input, fold layers, readout at position 1.
Bit transformer_ref(const std::string& word, const ModelSpec& model, int p);

// Declarative on-disk form (JSON). Schema documented in the README.
ModelSpec parse_model_spec(const std::string& json_text);
ScoreSpec parse_score_spec(const std::string& json_text);
TruthTable parse_truth_table(const std::string& json_text);

// The single-layer majority-of-a's demo model: enc(a)=(1,0), enc(b)=(0,1),
// all-tie scoring (zero bilinear), comparator FFN and readout on component 0.
ModelSpec majority_demo_model();

} // namespace ahac
