// Command-line surface: compile circuits, evaluate netlists, verify against
// the exact reference semantics, measure growth, run the majority demo and
// the streaming-uniformity audit.
//
// Exit codes: 0 success/pass, 1 verification mismatch, 2 invalid
// configuration, 3 I/O error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ahac/verify.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ahac;

namespace {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw io_error("read failure on " + path);
    return os.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    os << text;
    if (!os) throw io_error("cannot write " + out_path);
}

// --score dot | bilinear:<file> | table:<file>; the files hold score-spec
// JSON (bilinear) or truth-table JSON (table).
ScoreSpec parse_score_flag(const std::string& flag) {
    ScoreSpec s;
    if (flag == "dot") return s;
    auto colon = flag.find(':');
    std::string kind = flag.substr(0, colon);
    if (colon == std::string::npos)
        throw config_error("--score " + kind + " needs a spec file (" + kind +
                           ":<file>)");
    std::string path = flag.substr(colon + 1);
    if (kind == "bilinear") {
        ScoreSpec parsed = parse_score_spec(read_file(path));
        if (parsed.kind != ScoreSpec::Kind::bilinear)
            throw config_error("score spec in " + path + " is not bilinear");
        return parsed;
    }
    if (kind == "table") {
        s.kind = ScoreSpec::Kind::table;
        s.table = parse_truth_table(read_file(path));
        return s;
    }
    throw config_error("unknown score kind: " + kind);
}

struct CommonOpts {
    std::int64_t n = 2;
    std::int64_t k = 1;
    int p = 0;
    double c0 = -1, c1 = -1;
    std::string score = "dot";
    std::string model_path;
    std::string mode = "exhaustive";
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string out;
    std::string csv;
    std::int64_t ncap = -1;
    bool literal_levels = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "sequence length");
    cmd->add_option("--k", o.k, "vector width");
    cmd->add_option("--p", o.p, "float precision (even, >= 4)");
    cmd->add_option("--c0", o.c0, "precision schedule constant term");
    cmd->add_option("--c1", o.c1, "precision schedule log coefficient");
    cmd->add_option("--score", o.score, "dot | bilinear:<file> | table:<file>");
    cmd->add_option("--model", o.model_path, "model spec JSON file");
    cmd->add_option("--mode", o.mode, "exhaustive | random");
    cmd->add_option("--trials", o.trials, "random-mode trial count");
    cmd->add_option("--seed", o.seed, "random-mode seed");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--csv", o.csv, "CSV output file");
    cmd->add_option("--ncap", o.ncap, "capacity parameter (-1: max(n, 32))");
    cmd->add_flag("--literal-levels", o.literal_levels,
                  "emit explicit score-equality gadgets");
}

Params base_params(const CommonOpts& o) {
    Params b;
    b.n = o.n;
    b.k = o.k;
    if (o.c0 >= 0 || o.c1 >= 0) {
        if (o.c0 < 0 || o.c1 < 0) throw config_error("need both --c0 and --c1");
        b.c0 = o.c0;
        b.c1 = o.c1;
        b.p = scheduled_precision(o.n, o.c0, o.c1);
    } else {
        b.p = o.p ? o.p : 6;
    }
    b.validate();
    return b;
}

HeadParams head_params(const CommonOpts& o) {
    HeadParams hp;
    hp.base = base_params(o);
    hp.spec = parse_score_flag(o.score);
    hp.ncap = o.ncap;
    hp.literal_levels = o.literal_levels;
    hp.validate();
    return hp;
}

VerifyMode mode_of(const CommonOpts& o) {
    if (o.mode == "exhaustive") return VerifyMode::exhaustive;
    if (o.mode == "random") return VerifyMode::random;
    throw config_error("unknown mode: " + o.mode);
}

ModelSpec model_of(const CommonOpts& o) {
    if (o.model_path.empty()) throw config_error("this subcommand needs --model");
    return parse_model_spec(read_file(o.model_path));
}

int report_result(const VerifyReport& r, const CommonOpts& o) {
    write_output(r.to_json() + "\n", o.out);
    std::cerr << r.target << ": " << r.trials << " trials, " << r.mismatch_count
              << " mismatches\n";
    return r.pass() ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"threshold-circuit compiler and verifier for saturated-attention heads"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string netlist_path, input_bits;

    CLI::App* c_head = app.add_subcommand("compile-head", "emit a head netlist");
    CLI::App* c_layer = app.add_subcommand("compile-layer",
                                           "emit a netlist for a model's first layer");
    CLI::App* c_tf = app.add_subcommand("compile-transformer",
                                        "emit a whole-model netlist");
    CLI::App* c_eval = app.add_subcommand("eval", "evaluate a netlist on input bits");
    CLI::App* c_vhead = app.add_subcommand("verify-head",
                                           "compiled head vs exact reference");
    CLI::App* c_vops = app.add_subcommand("verify-ops",
                                          "all operation circuits vs references");
    CLI::App* c_stats = app.add_subcommand("stats", "size/depth growth scan over n");
    CLI::App* c_demo = app.add_subcommand("demo-majority",
                                          "end-to-end majority-language demo");
    CLI::App* c_audit = app.add_subcommand("audit-uniformity",
                                           "streaming emission vs in-memory compile");
    for (CLI::App* cmd : {c_head, c_layer, c_tf, c_vhead, c_vops, c_stats, c_demo, c_audit})
        add_common(cmd, o);
    c_eval->add_option("netlist", netlist_path, "netlist file")->required();
    c_eval->add_option("input", input_bits, "input bits, one 0/1 per circuit input")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (c_head->parsed()) {
        std::ostringstream os;
        serialize(compile_head(head_params(o)), os);
        write_output(os.str(), o.out);
        return 0;
    }
    if (c_layer->parsed()) {
        ModelSpec m = model_of(o);
        if (m.layers.empty()) throw config_error("model has no layers");
        CommonOpts lo = o;
        lo.k = m.k;
        Circuit c = compile_layer(base_params(lo), m.layers[0], o.ncap, o.literal_levels);
        write_output(serialize(c), o.out);
        return 0;
    }
    if (c_tf->parsed()) {
        ModelSpec m = model_of(o);
        CommonOpts to = o;
        to.k = m.k;
        write_output(serialize(compile_transformer(base_params(to), m, o.ncap)), o.out);
        return 0;
    }
    if (c_eval->parsed()) {
        Circuit c = deserialize(read_file(netlist_path));
        if (input_bits.size() != c.n_inputs)
            throw config_error("netlist expects " + std::to_string(c.n_inputs) +
                               " input bits, got " + std::to_string(input_bits.size()));
        BitVec in;
        for (char ch : input_bits) {
            if (ch != '0' && ch != '1') throw config_error("input bits must be 0/1");
            in.push_back(ch == '1');
        }
        std::string bits;
        for (Bit b : eval(c, in)) bits.push_back(b ? '1' : '0');
        write_output(bits + "\n", o.out);
        return 0;
    }
    if (c_vhead->parsed())
        return report_result(verify_head(head_params(o), mode_of(o), o.trials, o.seed), o);
    if (c_vops->parsed()) {
        // default sweep: every operation at its exhaustive desk-scale config
        nlohmann::json reports = nlohmann::json::array();
        int rc = 0;
        for (const char* name : {"sum", "div", "eq", "sel", "max", "score", "itadd",
                                 "add2", "sub2", "cmp", "threshold", "count"}) {
            OpConfig cfg;
            cfg.mode = mode_of(o);
            cfg.trials = o.trials;
            cfg.seed = o.seed;
            if (o.p) cfg.p = o.p;
            VerifyReport r = verify_op(name, cfg);
            reports.push_back(nlohmann::json::parse(r.to_json()));
            std::cerr << r.target << ": " << r.trials << " trials, "
                      << r.mismatch_count << " mismatches\n";
            if (!r.pass()) rc = 1;
        }
        write_output(reports.dump(2) + "\n", o.out);
        return rc;
    }
    if (c_stats->parsed()) {
        HeadParams hp = head_params(o);
        std::int64_t n_to = std::max<std::int64_t>(o.n, 20);
        GrowthReport g = growth_stats(hp, 2, n_to);
        std::string csv = g.csv();
        if (!o.csv.empty()) write_output(csv, o.csv);
        write_output(csv, o.out);
        std::cerr << "cubic fit " << (g.exact_fit ? "exact" : "NOT exact")
                  << " on held-out n\n";
        return g.exact_fit ? 0 : 1;
    }
    if (c_demo->parsed()) {
        DemoReport d = demo_majority(o.n > 2 ? o.n : 10, o.p ? o.p : 10);
        write_output(d.to_json() + "\n", o.out);
        return d.all_match ? 0 : 1;
    }
    if (c_audit->parsed()) {
        HeadParams hp = head_params(o);
        std::ostringstream os;
        AuditStats a = emit_streaming(hp, os);
        std::string direct = serialize(compile_head(hp));
        nlohmann::json j = {{"byte_identical", os.str() == direct},
                            {"bytes_emitted", a.bytes_emitted},
                            {"gates_emitted", a.gates_emitted},
                            {"peak_live_counters", a.peak_live_counters},
                            {"peak_counter_bits", a.peak_counter_bits}};
        write_output(j.dump(2) + "\n", o.out);
        return os.str() == direct ? 0 : 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
