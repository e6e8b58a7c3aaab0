// Python bindings for the main operations: float truncation/encoding, circuit
// compilation and evaluation, verification drivers, growth measurement and
// the majority demo. Report-producing functions return JSON strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ahac/verify.hpp"

#include <sstream>

namespace py = pybind11;
using namespace ahac;

namespace {

ScoreSpec score_from_kind(const std::string& score, const std::string& spec_json) {
    if (score == "dot") {
        ScoreSpec s;
        return s;
    }
    if (score == "bilinear" || score == "table") {
        if (spec_json.empty())
            throw config_error("score kind '" + score + "' needs spec_json");
        if (score == "bilinear") return parse_score_spec(spec_json);
        ScoreSpec s;
        s.kind = ScoreSpec::Kind::table;
        s.table = parse_truth_table(spec_json);
        return s;
    }
    throw config_error("unknown score kind: " + score);
}

HeadParams make_head_params(std::int64_t n, std::int64_t k, int p,
                            const std::string& score, const std::string& spec_json,
                            std::int64_t ncap, bool literal_levels) {
    HeadParams hp;
    hp.base.n = n;
    hp.base.k = k;
    hp.base.p = p;
    hp.spec = score_from_kind(score, spec_json);
    hp.ncap = ncap;
    hp.literal_levels = literal_levels;
    hp.validate();
    return hp;
}

VerifyMode mode_from(const std::string& mode) {
    if (mode == "exhaustive") return VerifyMode::exhaustive;
    if (mode == "random") return VerifyMode::random;
    throw config_error("unknown mode: " + mode);
}

} // namespace

PYBIND11_MODULE(_ahac, m) {
    m.doc() = "threshold-circuit compiler and verifier for saturated-attention heads";

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);

    m.def("q_of", &q_of, py::arg("p"), "largest p/2-bit natural number");
    m.def("scheduled_precision", &scheduled_precision, py::arg("n"), py::arg("c0"),
          py::arg("c1"), "p = ceil(c1*log2 n) + c0, rounded up to valid");

    m.def(
        "truncate",
        [](const std::string& r, int p) {
            FloatP f = truncate(parse_rational(r), p);
            return py::make_tuple(static_cast<int>(f.sign), f.mant, f.expo);
        },
        py::arg("rational"), py::arg("p"),
        "truncate a rational (as a string) into the p-precision float domain; "
        "returns (sign, mantissa, exponent) in canonical form");
    m.def(
        "float_value",
        [](int sign, std::int64_t mant, std::int64_t expo) {
            std::ostringstream os;
            os << value(FloatP{static_cast<std::int8_t>(sign), mant, expo});
            return os.str();
        },
        py::arg("sign"), py::arg("mant"), py::arg("expo"),
        "exact rational value of a float triple, as a string");
    m.def(
        "encode",
        [](int sign, std::int64_t mant, std::int64_t expo, int p) {
            BitVec b = encode(FloatP{static_cast<std::int8_t>(sign), mant, expo}, p);
            return std::vector<int>(b.begin(), b.end());
        },
        py::arg("sign"), py::arg("mant"), py::arg("expo"), py::arg("p"));
    m.def(
        "decode",
        [](const std::vector<int>& bits, int p) {
            BitVec b;
            for (int v : bits) b.push_back(v != 0);
            FloatP f = decode(b, p);
            return py::make_tuple(static_cast<int>(f.sign), f.mant, f.expo);
        },
        py::arg("bits"), py::arg("p"));
    m.def(
        "enumerate_canonical",
        [](int p) {
            std::vector<py::tuple> out;
            for (const FloatP& f : enumerate_canonical(p))
                out.push_back(py::make_tuple(static_cast<int>(f.sign), f.mant, f.expo));
            return out;
        },
        py::arg("p"), "all canonical floats at precision p, ascending by value");

    py::class_<Circuit>(m, "Circuit")
        .def_property_readonly("n_inputs", [](const Circuit& c) { return c.n_inputs; })
        .def_property_readonly("n_outputs",
                               [](const Circuit& c) { return c.outputs.size(); })
        .def_property_readonly("size", [](const Circuit& c) { return c.size(); })
        .def_property_readonly("depth",
                               [](const Circuit& c) { return size_depth(c).second; })
        .def_property_readonly("meta", [](const Circuit& c) { return c.meta; })
        .def(
            "eval",
            [](const Circuit& c, const std::vector<int>& bits) {
                BitVec in;
                for (int v : bits) in.push_back(v != 0);
                BitVec out = eval(c, in);
                return std::vector<int>(out.begin(), out.end());
            },
            py::arg("bits"))
        .def("serialize", [](const Circuit& c) { return serialize(c); })
        .def_static("deserialize",
                    [](const std::string& text) { return deserialize(text); });

    m.def(
        "compile_head",
        [](std::int64_t n, std::int64_t k, int p, const std::string& score,
           const std::string& spec_json, std::int64_t ncap, bool literal_levels) {
            return compile_head(
                make_head_params(n, k, p, score, spec_json, ncap, literal_levels));
        },
        py::arg("n"), py::arg("k"), py::arg("p"), py::arg("score") = "dot",
        py::arg("spec_json") = "", py::arg("ncap") = -1,
        py::arg("literal_levels") = false);
    m.def(
        "compile_transformer",
        [](const std::string& model_json, std::int64_t n, int p, std::int64_t ncap) {
            ModelSpec model = parse_model_spec(model_json);
            Params base;
            base.n = n;
            base.k = model.k;
            base.p = p;
            return compile_transformer(base, model, ncap);
        },
        py::arg("model_json"), py::arg("n"), py::arg("p"), py::arg("ncap") = -1);
    m.def("majority_demo_model_json", []() {
        // round-trippable JSON equivalent of the built-in demo model
        return std::string(R"({"alphabet": ["a", "b"], "k": 2, "p": 10,
 "embedding": {"kind": "symtable", "table": {"a": ["1", "0"], "b": ["0", "1"]}},
 "layers": [{"heads": [{"kind": "bilinear", "Q": [[0,0],[0,0]], "K": [[0,0],[0,0]]}],
   "ffn": {"kind": "comparator", "lhs": 0, "rhs": 1,
           "out_gt": ["1", "0"], "out_le": ["0", "0"]}}],
 "readout": {"component": 0}})");
    });
    m.def(
        "transformer_ref",
        [](const std::string& word, const std::string& model_json, int p) {
            return static_cast<int>(transformer_ref(word, parse_model_spec(model_json), p));
        },
        py::arg("word"), py::arg("model_json"), py::arg("p"),
        "exact reference decision for a word (1 accept, 0 reject)");

    m.def(
        "verify_head",
        [](std::int64_t n, std::int64_t k, int p, const std::string& score,
           const std::string& spec_json, const std::string& mode, std::uint64_t trials,
           std::uint64_t seed, std::int64_t ncap, bool literal_levels) {
            return verify_head(
                       make_head_params(n, k, p, score, spec_json, ncap, literal_levels),
                       mode_from(mode), trials, seed)
                .to_json();
        },
        py::arg("n"), py::arg("k"), py::arg("p"), py::arg("score") = "dot",
        py::arg("spec_json") = "", py::arg("mode") = "exhaustive",
        py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("ncap") = -1,
        py::arg("literal_levels") = false, "JSON verification report");
    m.def(
        "verify_op",
        [](const std::string& name, std::int64_t n, std::int64_t k, int p,
           std::int64_t nmax, std::int64_t rows, int width, const std::string& mode,
           std::uint64_t trials, std::uint64_t seed) {
            OpConfig cfg;
            cfg.n = n;
            cfg.k = k;
            cfg.p = p;
            cfg.nmax = nmax;
            cfg.rows = rows;
            cfg.width = width;
            cfg.mode = mode_from(mode);
            cfg.trials = trials;
            cfg.seed = seed;
            return verify_op(name, cfg).to_json();
        },
        py::arg("name"), py::arg("n") = 2, py::arg("k") = 1, py::arg("p") = 4,
        py::arg("nmax") = 4, py::arg("rows") = 3, py::arg("width") = 4,
        py::arg("mode") = "exhaustive", py::arg("trials") = 1000, py::arg("seed") = 1,
        "JSON verification report for one operation circuit");
    m.def(
        "growth_csv",
        [](std::int64_t k, int p, std::int64_t n_from, std::int64_t n_to) {
            HeadParams base;
            base.base.n = n_from;
            base.base.k = k;
            base.base.p = p;
            GrowthReport g = growth_stats(base, n_from, n_to);
            return py::make_tuple(g.csv(), g.exact_fit);
        },
        py::arg("k") = 1, py::arg("p") = 6, py::arg("n_from") = 2, py::arg("n_to") = 20,
        "(csv text, exact cubic fit flag)");
    m.def(
        "demo_majority",
        [](std::int64_t n_max, int p) { return demo_majority(n_max, p).to_json(); },
        py::arg("n_max") = 6, py::arg("p") = 10, "JSON demo report");
    m.def(
        "audit_streaming",
        [](std::int64_t n, std::int64_t k, int p) {
            HeadParams hp = make_head_params(n, k, p, "dot", "", -1, false);
            std::ostringstream os;
            AuditStats a = emit_streaming(hp, os);
            std::string direct = serialize(compile_head(hp));
            return py::dict(
                py::arg("byte_identical") = (os.str() == direct),
                py::arg("gates_emitted") = a.gates_emitted,
                py::arg("bytes_emitted") = a.bytes_emitted,
                py::arg("peak_live_counters") = a.peak_live_counters,
                py::arg("peak_counter_bits") = a.peak_counter_bits);
        },
        py::arg("n"), py::arg("k") = 1, py::arg("p") = 6);
}
