// Acceptance gate: ten independent criteria, one PASS/FAIL line each.
// Exit status is 0 only when every criterion passes. Tolerances and time
// budgets are pinned here, not configurable.

#include "ahac/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace ahac;

namespace {

int failures = 0;

void criterion(int num, const std::string& what, double budget_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > budget_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("%s criterion %d: %s (%.1fs%s%s)\n", ok ? "PASS" : "FAIL", num,
                what.c_str(), s, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

bool op_clean(const char* name, const OpConfig& cfg, std::string& detail) {
    VerifyReport r = verify_op(name, cfg);
    if (r.mismatch_count != 0) {
        detail += std::string(name) + ": " + std::to_string(r.mismatch_count) +
                  " mismatches; ";
        return false;
    }
    return true;
}

} // namespace

int main() {
    criterion(1, "truncation conformance", 10.0, [](std::string& detail) {
        FloatP w = truncate(Rat(5, 16), 6);
        if (!(w == FloatP{+1, 2, -3}) || value(w) != Rat(1, 4)) {
            detail = "worked example 5/16 at p=6";
            return false;
        }
        for (int p : {4, 6, 8})
            for (const FloatP& v : enumerate_canonical(p))
                if (!(truncate(value(v), p) == v)) {
                    detail = "fixpoint failure at p=" + std::to_string(p);
                    return false;
                }
        if (value(truncate(Rat(3), 6)) != Rat(3) ||
            value(truncate(Rat(31, 10), 6)) != Rat(2)) {
            detail = "non-monotonicity regression pair";
            return false;
        }
        return true;
    });

    criterion(2, "two-input XOR lookup compilation pin (size 7, depth 3)", 1.0,
              [](std::string& detail) {
        TruthTable t = synth::tabulate(2, 1, [](const BitVec& in) {
            return BitVec{static_cast<Bit>(in[0] ^ in[1])};
        });
        Circuit c = synth::lut_compile(t);
        auto [s, d] = size_depth(c);
        if (s != 7 || d != 3) {
            detail = "size " + std::to_string(s) + ", depth " + std::to_string(d);
            return false;
        }
        for (std::uint64_t v = 0; v < 4; ++v) {
            BitVec in{static_cast<Bit>(v & 1), static_cast<Bit>(v >> 1)};
            if (eval(c, in) != BitVec{static_cast<Bit>((v & 1) ^ (v >> 1))}) {
                detail = "truth table mismatch";
                return false;
            }
        }
        return true;
    });

    criterion(3, "arithmetic gadgets vs big-integer oracles", 300.0,
              [](std::string& detail) {
        bool ok = true;
        for (std::int64_t rows = 1; rows <= 3; ++rows)
            for (int width = 1; width <= 4; ++width) {
                OpConfig cfg;
                cfg.rows = rows;
                cfg.width = width;
                ok &= op_clean("itadd", cfg, detail);
            }
        OpConfig big;
        big.rows = 16;
        big.width = 64;
        big.mode = VerifyMode::random;
        big.trials = 10000;
        big.seed = 101;
        ok &= op_clean("itadd", big, detail);
        for (const char* name : {"add2", "sub2", "cmp"}) {
            OpConfig cfg;
            cfg.width = 4;
            ok &= op_clean(name, cfg, detail);
            OpConfig rnd;
            rnd.width = 64;
            rnd.mode = VerifyMode::random;
            rnd.trials = 10000;
            rnd.seed = 102;
            ok &= op_clean(name, rnd, detail);
        }
        for (std::int64_t n = 1; n <= 12; ++n) {
            OpConfig cfg;
            cfg.n = n;
            ok &= op_clean("threshold", cfg, detail);
            ok &= op_clean("count", cfg, detail);
        }
        return ok;
    });

    criterion(4, "float operation circuits vs reference operations", 600.0,
              [](std::string& detail) {
        bool ok = true;
        for (std::int64_t n = 1; n <= 3; ++n) {
            OpConfig cfg;
            cfg.n = n;
            cfg.p = 4;
            ok &= op_clean("sum", cfg, detail);
            ok &= op_clean("max", cfg, detail);
        }
        {
            OpConfig cfg;
            cfg.p = 4;
            cfg.nmax = 4;
            ok &= op_clean("div", cfg, detail);
            ok &= op_clean("eq", cfg, detail);
            ok &= op_clean("sel", cfg, detail);
            cfg.spec.kind = ScoreSpec::Kind::dot;
            ok &= op_clean("score", cfg, detail);
        }
        for (int p : {6, 8}) {
            OpConfig cfg;
            cfg.p = p;
            cfg.mode = VerifyMode::random;
            cfg.trials = 1000;
            cfg.seed = 103;
            cfg.n = 16;
            cfg.k = 2;
            cfg.nmax = 16;
            ok &= op_clean("sum", cfg, detail);
            ok &= op_clean("div", cfg, detail);
            ok &= op_clean("eq", cfg, detail);
            ok &= op_clean("sel", cfg, detail);
            ok &= op_clean("max", cfg, detail);
            cfg.spec.kind = ScoreSpec::Kind::dot;
            ok &= op_clean("score", cfg, detail);
        }
        return ok;
    });

    criterion(5, "compiled head vs exact head reference", 900.0,
              [](std::string& detail) {
        HeadParams hp;
        hp.base.n = 2;
        hp.base.k = 1;
        hp.base.p = 4;
        hp.spec.kind = ScoreSpec::Kind::dot;
        VerifyReport r = verify_head(hp, VerifyMode::exhaustive, 0, 0);
        if (r.trials != 49 || r.mismatch_count != 0) {
            detail = "exhaustive 49-case suite";
            return false;
        }
        for (std::int64_t n : {2, 4, 8, 16})
            for (std::int64_t k : {1, 2})
                for (int p : {6, 8}) {
                    HeadParams g;
                    g.base.n = n;
                    g.base.k = k;
                    g.base.p = p;
                    g.spec.kind = ScoreSpec::Kind::dot;
                    VerifyReport rr = verify_head(g, VerifyMode::random, 1000, 104);
                    if (rr.mismatch_count != 0) {
                        detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                 " p=" + std::to_string(p) + ": " +
                                 std::to_string(rr.mismatch_count) + " mismatches";
                        return false;
                    }
                }
        return true;
    });

    criterion(6, "head depth is one fixed constant across n", 600.0,
              [](std::string& detail) {
        std::size_t d0 = 0;
        for (std::int64_t n = 2; n <= 32; ++n) {
            HeadParams hp;
            hp.base.n = n;
            hp.base.k = 1;
            hp.base.p = 6;
            hp.spec.kind = ScoreSpec::Kind::dot;
            std::size_t d = plan_head(hp).depth;
            if (n == 2) d0 = d;
            if (d != d0) {
                detail = "depth changed at n=" + std::to_string(n);
                return false;
            }
        }
        std::size_t ds = 0;
        for (std::int64_t n : {4, 8, 16}) {
            HeadParams hp;
            hp.base.n = n;
            hp.base.k = 1;
            hp.base.p = scheduled_precision(n, 2.0, 2.0);
            hp.spec.kind = ScoreSpec::Kind::dot;
            std::size_t d = plan_head(hp).depth;
            if (n == 4) ds = d;
            if (d != ds) {
                detail = "scheduled-precision depth changed at n=" + std::to_string(n);
                return false;
            }
        }
        return true;
    });

    criterion(7, "head size follows an exact cubic in n; growth CSV emitted", 600.0,
              [](std::string& detail) {
        HeadParams base;
        base.base.n = 2;
        base.base.k = 1;
        base.base.p = 6;
        base.spec.kind = ScoreSpec::Kind::dot;
        GrowthReport g = growth_stats(base, 2, 20);
        if (!g.exact_fit) {
            detail = "cubic from n in {2..5} missed a held-out point";
            return false;
        }
        std::ofstream csv("acceptance_growth.csv");
        csv << g.csv();
        if (!csv) {
            detail = "could not write acceptance_growth.csv";
            return false;
        }
        return true;
    });

    criterion(8, "streaming emission byte-identical; bounded audit counters", 300.0,
              [](std::string& detail) {
        const std::uint64_t C = 32; // pinned audit constant
        for (std::int64_t n : {2, 8, 16}) {
            HeadParams hp;
            hp.base.n = n;
            hp.base.k = 1;
            hp.base.p = 6;
            hp.spec.kind = ScoreSpec::Kind::dot;
            std::ostringstream os;
            AuditStats a = emit_streaming(hp, os);
            if (os.str() != serialize(compile_head(hp))) {
                detail = "byte mismatch at n=" + std::to_string(n);
                return false;
            }
            std::uint64_t logn = 1;
            while ((std::int64_t{1} << logn) < n) ++logn;
            if (a.peak_counter_bits > C * logn) {
                detail = "peak counter bits " + std::to_string(a.peak_counter_bits) +
                         " exceed " + std::to_string(C * logn) + " at n=" +
                         std::to_string(n);
                return false;
            }
        }
        return true;
    });

    criterion(9, "majority demo: compiled transformer vs reference on all words", 900.0,
              [](std::string& detail) {
        DemoReport d = demo_majority(10, 10);
        std::uint64_t agree = 0, words = 0;
        for (const DemoRow& r : d.rows) {
            agree += r.ref_majority_agree;
            words += r.words;
        }
        detail = "reference agrees with true majority on " + std::to_string(agree) +
                 "/" + std::to_string(words) + " words (informational)";
        return d.all_match;
    });

    criterion(10, "attention weight properties over the exhaustive p=4 domain", 10.0,
              [](std::string& detail) {
        std::vector<FloatP> dom = enumerate_canonical(4);
        std::vector<std::vector<FloatP>> tuples;
        for (const FloatP& a : dom) {
            tuples.push_back({a});
            for (const FloatP& b : dom) {
                tuples.push_back({a, b});
                for (const FloatP& c : dom) tuples.push_back({a, b, c});
            }
        }
        for (const auto& s : tuples) {
            std::vector<Rat> w = xi(s);
            MaxResult m = max_seq(s);
            Rat total = 0;
            Rat share(1, static_cast<std::int64_t>(m.argmax.size()));
            for (std::size_t j = 0; j < s.size(); ++j) {
                total += w[j];
                bool in_argmax =
                    std::find(m.argmax.begin(), m.argmax.end(),
                              static_cast<std::int64_t>(j + 1)) != m.argmax.end();
                if (w[j] != (in_argmax ? share : Rat(0))) {
                    detail = "support/uniformity violation";
                    return false;
                }
            }
            if (total != 1) {
                detail = "weights do not sum to 1";
                return false;
            }
        }
        return true;
    });

    return failures == 0 ? 0 : 1;
}
