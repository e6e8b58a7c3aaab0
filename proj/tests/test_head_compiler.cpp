#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahac/head_compiler.hpp"
#include "ahac/verify.hpp"

#include <sstream>

using namespace ahac;

namespace {

HeadParams hp_of(std::int64_t n, std::int64_t k, int p,
                 ScoreSpec::Kind kind = ScoreSpec::Kind::dot) {
    HeadParams hp;
    hp.base.n = n;
    hp.base.k = k;
    hp.base.p = p;
    hp.spec.kind = kind;
    if (kind == ScoreSpec::Kind::bilinear) {
        hp.spec.Q.assign(static_cast<std::size_t>(k),
                         std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
        hp.spec.K = hp.spec.Q;
    }
    return hp;
}

// Decode the circuit output as the head reference would produce it.
BitVec head_oracle(const HeadParams& hp, const BitVec& in) {
    std::int64_t n = hp.base.n, k = hp.base.k;
    int p = hp.base.p;
    std::vector<FVec> X;
    for (std::int64_t j = 0; j < n; ++j) {
        FVec v;
        for (std::int64_t c = 0; c < k; ++c) {
            auto base = in.begin() + (j * k + c) * p;
            v.push_back(decode(BitVec(base, base + p), p));
        }
        X.push_back(v);
    }
    std::vector<FVec> out = head_ref(X, hp.spec, p);
    BitVec bits;
    for (const FVec& v : out)
        for (const FloatP& f : v) {
            BitVec e = encode(f, p);
            bits.insert(bits.end(), e.begin(), e.end());
        }
    return bits;
}

} // namespace

TEST_CASE("compile_head: exhaustive 49-case equivalence at n=2, k=1, p=4") {
    HeadParams hp = hp_of(2, 1, 4);
    VerifyReport r = verify_head(hp, VerifyMode::exhaustive, 0, 0);
    CHECK(r.trials == 49);
    CHECK(r.mismatch_count == 0);
}

TEST_CASE("compile_head: direct evaluation matches the reference oracle") {
    HeadParams hp = hp_of(2, 1, 6);
    Circuit c = compile_head(hp);
    CHECK(c.n_inputs == 12);
    for (const FloatP& a : enumerate_canonical(6))
        for (const FloatP& b : enumerate_canonical(6)) {
            BitVec in = encode(a, 6);
            BitVec eb = encode(b, 6);
            in.insert(in.end(), eb.begin(), eb.end());
            REQUIRE(eval(c, in) == head_oracle(hp, in));
        }
}

TEST_CASE("compile_head: random grid across shapes and score kinds") {
    for (auto [n, k, p] : {std::tuple{3, 2, 6}, {4, 1, 6}, {2, 2, 8}}) {
        HeadParams hp = hp_of(n, k, p);
        VerifyReport r = verify_head(hp, VerifyMode::random, 200, 77);
        CHECK(r.mismatch_count == 0);
    }
    HeadParams hp = hp_of(3, 2, 6, ScoreSpec::Kind::bilinear);
    hp.spec.Q = {{1, 0}, {-1, 2}};
    hp.spec.K = {{0, 1}, {1, 1}};
    CHECK(verify_head(hp, VerifyMode::random, 200, 78).mismatch_count == 0);
}

TEST_CASE("literal score-level indicators give an equivalent circuit") {
    HeadParams hp = hp_of(2, 1, 4);
    hp.literal_levels = true;
    VerifyReport r = verify_head(hp, VerifyMode::exhaustive, 0, 0);
    CHECK(r.mismatch_count == 0);
    // the explicit-equality form costs extra gates
    hp.literal_levels = false;
    std::uint64_t base_gates = plan_head(hp).total_gates;
    hp.literal_levels = true;
    CHECK(plan_head(hp).total_gates > base_gates);
}

TEST_CASE("plan_head agrees with the materialized circuit") {
    for (std::int64_t n : {2, 3, 5}) {
        HeadParams hp = hp_of(n, 1, 6);
        HeadPlan plan = plan_head(hp);
        Circuit c = compile_head(hp);
        auto [s, d] = size_depth(c);
        CHECK(plan.total_gates == s);
        CHECK(plan.depth == d);
        CHECK(plan.stages.size() == 6);
        CHECK(plan.stages[0].name == "scores");
    }
}

TEST_CASE("head size at fixed (k, p, ncap) is polynomial: fourth differences vanish") {
    std::vector<std::int64_t> sizes;
    for (std::int64_t n = 2; n <= 8; ++n)
        sizes.push_back(static_cast<std::int64_t>(plan_head(hp_of(n, 1, 6)).total_gates));
    for (int round = 0; round < 4; ++round) {
        std::vector<std::int64_t> next;
        for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
            next.push_back(sizes[i + 1] - sizes[i]);
        sizes = std::move(next);
    }
    for (std::int64_t d : sizes) CHECK(d == 0);
}

TEST_CASE("ncap below n is rejected; LUT width overflow is rejected") {
    HeadParams hp = hp_of(8, 1, 6);
    hp.ncap = 4;
    CHECK_THROWS_AS(hp.validate(), config_error);
    HeadParams big = hp_of(2, 1, 14); // 14 + count_width(32) = 20 > 16
    CHECK_THROWS_AS(big.validate(), config_error);
}

TEST_CASE("streaming emission is byte-identical to serialize(compile_head)") {
    for (std::int64_t n : {2, 4}) {
        HeadParams hp = hp_of(n, 1, 6);
        std::ostringstream os;
        AuditStats a = emit_streaming(hp, os);
        std::string direct = serialize(compile_head(hp));
        REQUIRE(os.str() == direct);
        CHECK(a.gates_emitted == size_depth(compile_head(hp)).first);
        CHECK(a.bytes_emitted == direct.size());
        CHECK(a.peak_live_counters > 0);
        CHECK(a.peak_counter_bits > 0);
    }
}

TEST_CASE("compile_layer matches layer_ref with a comparator FFN") {
    Params base;
    base.n = 3;
    base.k = 2;
    base.p = 6;
    LayerSpec layer;
    ScoreSpec tie;
    tie.kind = ScoreSpec::Kind::bilinear;
    tie.Q = {{0, 0}, {0, 0}};
    tie.K = tie.Q;
    layer.heads = {tie};
    layer.ffn.kind = FfnSpec::Kind::comparator;
    layer.ffn.lhs = 0;
    layer.ffn.rhs = 1;
    layer.ffn.out_gt = {truncate(Rat(1), 6), truncate(Rat(0), 6)};
    layer.ffn.out_le = {truncate(Rat(0), 6), truncate(Rat(0), 6)};
    VerifyReport r = verify_layer(base, layer, VerifyMode::random, 300, 5);
    CHECK(r.mismatch_count == 0);
}

TEST_CASE("compile_layer with a dot-score head matches layer_ref") {
    Params base;
    base.n = 2;
    base.k = 2;
    base.p = 6;
    LayerSpec layer;
    ScoreSpec d;
    d.kind = ScoreSpec::Kind::dot;
    layer.heads = {d};
    layer.ffn.kind = FfnSpec::Kind::comparator;
    layer.ffn.lhs = 0;
    layer.ffn.rhs = 1;
    layer.ffn.out_gt = {truncate(Rat(1), 6), truncate(Rat(-1), 6)};
    layer.ffn.out_le = {truncate(Rat(0), 6), truncate(Rat(2), 6)};
    VerifyReport r = verify_layer(base, layer, VerifyMode::random, 300, 6);
    CHECK(r.mismatch_count == 0);
}

TEST_CASE("compile_transformer matches transformer_ref on the demo model") {
    ModelSpec m = majority_demo_model();
    Params base;
    base.k = 2;
    base.p = 10;
    for (std::int64_t n : {1, 2, 3, 4}) {
        base.n = n;
        VerifyReport r = verify_transformer(base, m, VerifyMode::exhaustive, 0, 0, n);
        CHECK(r.trials == (std::uint64_t{1} << n));
        CHECK(r.mismatch_count == 0);
    }
}

TEST_CASE("transformer circuit meta and shape") {
    ModelSpec m = majority_demo_model();
    Params base;
    base.n = 3;
    base.k = 2;
    base.p = 10;
    Circuit c = compile_transformer(base, m, 3);
    CHECK(c.n_inputs == 3); // one code bit per position for a 2-symbol alphabet
    CHECK(c.outputs.size() == 1);
    CHECK(c.meta.at("generator") == "compile_transformer");
}
