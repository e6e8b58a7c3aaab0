#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahac/circuit.hpp"
#include "ahac/synth.hpp"

#include <random>
#include <sstream>

using namespace ahac;

namespace {

// The two-input XOR circuit in its textbook shape: two inputs, two NOT,
// two AND, one OR; size 7, depth 3.
Circuit xor_circuit() {
    std::vector<Gate> g = {
        {Op::IN, {}},        // 0
        {Op::IN, {}},        // 1
        {Op::NOT, {0}},      // 2
        {Op::NOT, {1}},      // 3
        {Op::AND, {0, 3}},   // 4
        {Op::AND, {2, 1}},   // 5
        {Op::OR, {4, 5}},    // 6
    };
    return build(g, {6});
}

} // namespace

TEST_CASE("build and validate") {
    std::vector<Gate> g = {{Op::IN, {}}, {Op::IN, {}}, {Op::AND, {0, 1}}};
    Circuit c = build(g, {2});
    CHECK(c.size() == 3);
    CHECK(c.n_inputs == 2);

    CHECK_THROWS_AS(build({{Op::IN, {}}, {Op::AND, {0, 5}}}, {1}), config_error);
    CHECK_THROWS_AS(build(g, {}), config_error);                        // empty outputs
    CHECK_THROWS_AS(build({{Op::IN, {}}, {Op::NOT, {0, 0}}}, {1}), config_error);
    CHECK_THROWS_AS(build({{Op::NOT, {0}}, {Op::IN, {}}}, {0}), config_error); // IN not first
    CHECK_THROWS_AS(build({{Op::IN, {}}, {Op::MAJ, {0}}}, {1}, {}, "ac0"), config_error);
}

TEST_CASE("eval: XOR truth table and strict majority") {
    Circuit c = xor_circuit();
    CHECK(eval(c, {0, 0}) == BitVec{0});
    CHECK(eval(c, {0, 1}) == BitVec{1});
    CHECK(eval(c, {1, 0}) == BitVec{1});
    CHECK(eval(c, {1, 1}) == BitVec{0});

    Circuit m2 = build({{Op::IN, {}}, {Op::IN, {}}, {Op::MAJ, {0, 1}}}, {2});
    CHECK(eval(m2, {1, 0}) == BitVec{0}); // even tie is 0
    CHECK(eval(m2, {1, 1}) == BitVec{1});
    Circuit m3 = build({{Op::IN, {}}, {Op::IN, {}}, {Op::IN, {}}, {Op::MAJ, {0, 1, 2}}}, {3});
    CHECK(eval(m3, {1, 1, 0}) == BitVec{1});
    CHECK(eval(m3, {1, 0, 0}) == BitVec{0});
}

TEST_CASE("size and depth") {
    auto [s, d] = size_depth(xor_circuit());
    CHECK(s == 7);
    CHECK(d == 3);

    Circuit single = build({{Op::IN, {}}}, {0});
    auto [s1, d1] = size_depth(single);
    CHECK(s1 == 1);
    CHECK(d1 == 0);

    Circuit nn = build({{Op::IN, {}}, {Op::NOT, {0}}, {Op::NOT, {1}}}, {2});
    auto [s2, d2] = size_depth(nn);
    CHECK(s2 == 3);
    CHECK(d2 == 2);
}

TEST_CASE("forward and reverse depth agree") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<Gate> g;
        std::size_t nin = 2 + rng() % 4;
        for (std::size_t i = 0; i < nin; ++i) g.push_back({Op::IN, {}});
        std::size_t total = nin + 5 + rng() % 40;
        for (std::size_t i = nin; i < total; ++i) {
            int pick = static_cast<int>(rng() % 4);
            Op op = pick == 0 ? Op::NOT : pick == 1 ? Op::AND : pick == 2 ? Op::OR : Op::MAJ;
            std::size_t arity = op == Op::NOT ? 1 : 1 + rng() % 4;
            std::vector<GateId> ins;
            for (std::size_t a = 0; a < arity; ++a)
                ins.push_back(static_cast<GateId>(rng() % i));
            g.push_back({op, ins});
        }
        Circuit c = build(g, {static_cast<GateId>(total - 1)});
        CHECK(depth_forward(c) == depth_reverse(c));
    }
}

TEST_CASE("packed evaluation agrees with scalar evaluation") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<Gate> g;
        std::size_t nin = 3 + rng() % 5;
        for (std::size_t i = 0; i < nin; ++i) g.push_back({Op::IN, {}});
        std::size_t total = nin + 10 + rng() % 60;
        for (std::size_t i = nin; i < total; ++i) {
            int pick = static_cast<int>(rng() % 5);
            Op op = pick == 0 ? Op::NOT : pick == 1 ? Op::AND : pick == 2 ? Op::OR
                   : pick == 3 ? Op::MAJ : Op::C1;
            std::vector<GateId> ins;
            if (op != Op::C1) {
                std::size_t arity = op == Op::NOT ? 1 : 1 + rng() % 5;
                for (std::size_t a = 0; a < arity; ++a)
                    ins.push_back(static_cast<GateId>(rng() % i));
            }
            g.push_back({op, ins});
        }
        std::vector<GateId> outs;
        for (int o = 0; o < 3; ++o) outs.push_back(static_cast<GateId>(total - 1 - o));
        Circuit c = build(g, outs);

        std::vector<BitVec> ins64;
        for (int b = 0; b < 64; ++b) {
            BitVec in(nin);
            for (auto& x : in) x = rng() & 1;
            ins64.push_back(in);
        }
        std::vector<std::uint64_t> packed(nin, 0);
        for (int b = 0; b < 64; ++b)
            for (std::size_t i = 0; i < nin; ++i)
                if (ins64[b][i]) packed[i] |= std::uint64_t{1} << b;
        std::vector<std::uint64_t> pout = eval_packed(c, packed);
        for (int b = 0; b < 64; ++b) {
            BitVec want = eval(c, ins64[b]);
            for (std::size_t o = 0; o < want.size(); ++o)
                CHECK(((pout[o] >> b) & 1) == want[o]);
        }
    }
}

TEST_CASE("serialization round trip is byte-identical") {
    Circuit c = xor_circuit();
    c.meta = {{"n", "2"}, {"generator", "test"}};
    std::string text = serialize(c);
    Circuit d = deserialize(text);
    CHECK(serialize(d) == text);
    CHECK(d.meta == c.meta);
    for (std::uint8_t a : {0, 1})
        for (std::uint8_t b : {0, 1})
            CHECK(eval(d, {a, b}) == eval(c, {a, b}));
}

TEST_CASE("deserialize rejects malformed documents with line numbers") {
    CHECK_THROWS_AS(deserialize("nonsense"), config_error);
    Circuit c = xor_circuit();
    std::string text = serialize(c);
    // corrupt a gate line
    std::string bad = text;
    bad.replace(bad.find("NOT"), 3, "XYZ");
    try {
        deserialize(bad);
        CHECK(false);
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
    // MAJ under ac0 basis
    std::string maj = "tc0-netlist v1 basis=ac0 inputs=2\n"
                      "g2 = MAJ(g0,g1)\noutputs: g2\nmeta:\n";
    CHECK_THROWS_AS(deserialize(maj), config_error);
}

TEST_CASE("streamed serialize equals string serialize") {
    Circuit c = xor_circuit();
    c.meta = {{"a", "1"}, {"b", "2"}};
    std::ostringstream os;
    serialize(c, os);
    CHECK(os.str() == serialize(c));
}
