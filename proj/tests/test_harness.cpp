#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahac/verify.hpp"

#include <nlohmann/json.hpp>

using namespace ahac;

TEST_CASE("verify_op covers every operation name") {
    for (const char* name : {"sum", "div", "eq", "sel", "max", "score", "itadd",
                             "add2", "sub2", "cmp", "threshold", "count"}) {
        OpConfig cfg; // exhaustive defaults: n=2, k=1, p=4, width=4
        VerifyReport r = verify_op(name, cfg);
        CHECK(r.mismatch_count == 0);
        CHECK(r.trials > 0);
        CHECK(r.target == std::string("op:") + name);
        CHECK(r.pass());
    }
    CHECK_THROWS_AS(verify_op("bogus", OpConfig{}), config_error);
}

TEST_CASE("verify report serializes with the full shape") {
    OpConfig cfg;
    VerifyReport r = verify_op("eq", cfg);
    nlohmann::json j = nlohmann::json::parse(r.to_json());
    CHECK(j.at("target") == "op:eq");
    CHECK(j.at("trials").get<std::uint64_t>() == r.trials);
    CHECK(j.at("mismatch_count") == 0);
    CHECK(j.at("mismatches").is_array());
    CHECK(j.at("config").is_object());
    CHECK(j.contains("elapsed_s"));
}

TEST_CASE("mismatches are detected and capped at ten recorded entries") {
    // compare a constant-0 circuit against a constant-1 oracle
    Circuit c = build({{Op::IN, {}}, {Op::C0, {}}}, {1});
    std::vector<BitVec> inputs;
    for (int i = 0; i < 25; ++i) inputs.push_back({static_cast<Bit>(i & 1)});
    VerifyReport r = run_verify("counter", c, inputs,
                                [](const BitVec&) { return BitVec{1}; }, {});
    CHECK(r.trials == 25);
    CHECK(r.mismatch_count == 25);
    CHECK(r.mismatches.size() == 10);
    CHECK_FALSE(r.pass());
    CHECK(r.mismatches[0].got == BitVec{0});
    CHECK(r.mismatches[0].want == BitVec{1});
}

TEST_CASE("input generators") {
    CHECK(enumerate_float_inputs(4, 2).size() == 49);
    CHECK_THROWS_AS(enumerate_float_inputs(8, 4), config_error); // over the cap
    CHECK(enumerate_raw_inputs(3).size() == 8);
    CHECK_THROWS_AS(enumerate_raw_inputs(21), config_error);
    std::vector<BitVec> r1 = random_float_inputs(6, 2, 50, 9);
    std::vector<BitVec> r2 = random_float_inputs(6, 2, 50, 9);
    CHECK(r1 == r2);
    CHECK(r1.size() == 50);
    for (const BitVec& in : r1) {
        REQUIRE(in.size() == 12);
        CHECK_NOTHROW(decode(BitVec(in.begin(), in.begin() + 6), 6));
        CHECK_NOTHROW(decode(BitVec(in.begin() + 6, in.end()), 6));
    }
}

TEST_CASE("growth_stats: cubic fit, CSV schema, and error cases") {
    HeadParams base;
    base.base.n = 2;
    base.base.k = 1;
    base.base.p = 6;
    base.spec.kind = ScoreSpec::Kind::dot;
    GrowthReport g = growth_stats(base, 2, 10);
    CHECK(g.rows.size() == 9);
    CHECK(g.exact_fit);
    CHECK(g.poly.size() == 4);
    std::string csv = g.csv();
    CHECK(csv.rfind("n,p,size,depth,scores,max,select,sum,count,divide\n", 0) == 0);
    // every row of the table matches a direct plan
    for (const GrowthRow& r : g.rows) {
        HeadParams hp = base;
        hp.base.n = r.n;
        HeadPlan plan = plan_head(hp);
        REQUIRE(r.size == plan.total_gates);
        REQUIRE(r.depth == plan.depth);
    }
    CHECK_THROWS_AS(growth_stats(base, 2, 5), config_error); // needs >= 5 points
}

TEST_CASE("growth_stats follows the precision schedule when c0/c1 are set") {
    HeadParams base;
    base.base.n = 4;
    base.base.k = 1;
    base.base.p = 6;
    base.base.c0 = 2.0;
    base.base.c1 = 2.0;
    base.spec.kind = ScoreSpec::Kind::dot;
    GrowthReport g = growth_stats(base, 4, 16);
    for (const GrowthRow& r : g.rows)
        REQUIRE(r.p == scheduled_precision(r.n, 2.0, 2.0));
}

TEST_CASE("demo_majority: circuits equal the reference on every word") {
    DemoReport d = demo_majority(4, 10);
    CHECK(d.all_match);
    CHECK(d.rows.size() == 4);
    std::uint64_t total_words = 0;
    for (const DemoRow& r : d.rows) {
        CHECK(r.circuit_ref_mismatches == 0);
        CHECK(r.words == (std::uint64_t{1} << r.n));
        CHECK(r.ref_majority_agree == r.words);
        total_words += r.words;
    }
    CHECK(total_words == 2 + 4 + 8 + 16);
    nlohmann::json j = nlohmann::json::parse(d.to_json());
    CHECK(j.at("all_match") == true);
    CHECK(j.at("rows").size() == 4);
}

TEST_CASE("eval_batch equals per-input evaluation") {
    Circuit c = build({{Op::IN, {}}, {Op::IN, {}}, {Op::MAJ, {0, 1}}, {Op::NOT, {2}}},
                      {2, 3});
    std::vector<BitVec> inputs;
    for (int i = 0; i < 130; ++i) inputs.push_back({static_cast<Bit>(i & 1),
                                                    static_cast<Bit>((i >> 1) & 1)});
    std::vector<BitVec> out = eval_batch(c, inputs);
    REQUIRE(out.size() == inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
        REQUIRE(out[i] == eval(c, inputs[i]));
}
