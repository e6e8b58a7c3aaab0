#include "ahac/verify.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <sstream>

namespace ahac {

using nlohmann::json;

namespace {

std::string bits_to_string(const BitVec& b) {
    std::string s;
    s.reserve(b.size());
    for (Bit x : b) s.push_back(x ? '1' : '0');
    return s;
}

int count_width(std::int64_t v) {
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v)));
}

} // namespace

std::string VerifyReport::to_json() const {
    json j;
    j["target"] = target;
    j["config"] = config;
    j["trials"] = trials;
    j["mismatch_count"] = mismatch_count;
    json ms = json::array();
    for (const Mismatch& m : mismatches)
        ms.push_back({{"input", bits_to_string(m.input)},
                      {"got", bits_to_string(m.got)},
                      {"want", bits_to_string(m.want)}});
    j["mismatches"] = ms;
    j["elapsed_s"] = elapsed_s;
    j["verdict"] = pass() ? "pass" : "fail";
    return j.dump(2);
}

std::vector<BitVec> eval_batch(const Circuit& c, const std::vector<BitVec>& inputs) {
    std::vector<BitVec> outs(inputs.size());
    std::size_t nin = c.n_inputs;
    for (std::size_t base = 0; base < inputs.size(); base += 64) {
        std::size_t lanes = std::min<std::size_t>(64, inputs.size() - base);
        std::vector<std::uint64_t> packed(nin, 0);
        for (std::size_t b = 0; b < lanes; ++b) {
            const BitVec& in = inputs[base + b];
            if (in.size() != nin) throw config_error("eval_batch: input width mismatch");
            for (std::size_t i = 0; i < nin; ++i)
                if (in[i]) packed[i] |= std::uint64_t{1} << b;
        }
        std::vector<std::uint64_t> po = eval_packed(c, packed);
        for (std::size_t b = 0; b < lanes; ++b) {
            BitVec o(po.size());
            for (std::size_t i = 0; i < po.size(); ++i) o[i] = (po[i] >> b) & 1;
            outs[base + b] = std::move(o);
        }
    }
    return outs;
}

VerifyReport run_verify(const std::string& target, const Circuit& c,
                        const std::vector<BitVec>& inputs,
                        const std::function<BitVec(const BitVec&)>& oracle,
                        std::map<std::string, std::string> config) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    r.target = target;
    r.config = std::move(config);
    r.trials = inputs.size();
    std::vector<BitVec> got = eval_batch(c, inputs);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        BitVec want = oracle(inputs[i]);
        if (want != got[i]) {
            ++r.mismatch_count;
            if (r.mismatches.size() < 10)
                r.mismatches.push_back({inputs[i], got[i], want});
        }
    }
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<BitVec> enumerate_float_inputs(int p, std::size_t nf, std::uint64_t cap) {
    std::vector<FloatP> dom = enumerate_canonical(p);
    std::vector<BitVec> encs;
    for (const FloatP& f : dom) encs.push_back(encode(f, p));
    double total = 1;
    for (std::size_t i = 0; i < nf; ++i) total *= static_cast<double>(dom.size());
    if (total > static_cast<double>(cap))
        throw config_error("exhaustive verification would need " +
                           std::to_string(total) + " cases (cap " + std::to_string(cap) + ")");
    std::vector<BitVec> out;
    std::vector<std::size_t> idx(nf, 0);
    while (true) {
        BitVec in;
        for (std::size_t f = 0; f < nf; ++f)
            in.insert(in.end(), encs[idx[f]].begin(), encs[idx[f]].end());
        out.push_back(std::move(in));
        std::size_t f = 0;
        for (; f < nf; ++f) {
            if (++idx[f] < dom.size()) break;
            idx[f] = 0;
        }
        if (f == nf) break;
    }
    return out;
}

std::vector<BitVec> random_float_inputs(int p, std::size_t nf, std::uint64_t trials,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BitVec> out;
    for (std::uint64_t t = 0; t < trials; ++t) {
        BitVec in;
        for (std::size_t f = 0; f < nf; ++f) {
            BitVec e = encode(rand_canonical(p, rng), p);
            in.insert(in.end(), e.begin(), e.end());
        }
        out.push_back(std::move(in));
    }
    return out;
}

std::vector<BitVec> enumerate_raw_inputs(std::size_t width, std::uint64_t cap) {
    if (width >= 64 || (std::uint64_t{1} << width) > cap)
        throw config_error("exhaustive raw enumeration exceeds cap");
    std::vector<BitVec> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
        BitVec in(width);
        for (std::size_t i = 0; i < width; ++i) in[i] = (v >> i) & 1;
        out.push_back(std::move(in));
    }
    return out;
}

std::vector<BitVec> random_raw_inputs(std::size_t width, std::uint64_t trials,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BitVec> out;
    for (std::uint64_t t = 0; t < trials; ++t) {
        BitVec in(width);
        for (std::size_t i = 0; i < width; ++i) in[i] = rng() & 1;
        out.push_back(std::move(in));
    }
    return out;
}

namespace {

std::vector<FloatP> decode_floats(const BitVec& in, std::size_t nf, int p) {
    std::vector<FloatP> fs(nf);
    for (std::size_t f = 0; f < nf; ++f)
        fs[f] = decode(BitVec(in.begin() + f * p, in.begin() + (f + 1) * p), p);
    return fs;
}

BitVec encode_floats(const std::vector<FloatP>& fs, int p) {
    BitVec out;
    for (const FloatP& f : fs) {
        BitVec e = encode(f, p);
        out.insert(out.end(), e.begin(), e.end());
    }
    return out;
}

std::map<std::string, std::string> base_config(std::int64_t n, std::int64_t k, int p,
                                               VerifyMode mode, std::uint64_t trials,
                                               std::uint64_t seed) {
    return {{"n", std::to_string(n)},
            {"k", std::to_string(k)},
            {"p", std::to_string(p)},
            {"mode", mode == VerifyMode::exhaustive ? "exhaustive" : "random"},
            {"trials", std::to_string(trials)},
            {"seed", std::to_string(seed)}};
}

std::vector<BitVec> float_inputs_for(VerifyMode mode, int p, std::size_t nf,
                                     std::uint64_t trials, std::uint64_t seed) {
    return mode == VerifyMode::exhaustive ? enumerate_float_inputs(p, nf)
                                          : random_float_inputs(p, nf, trials, seed);
}

} // namespace

VerifyReport verify_head(const HeadParams& hp, VerifyMode mode, std::uint64_t trials,
                         std::uint64_t seed) {
    std::int64_t n = hp.base.n, k = hp.base.k;
    int p = hp.base.p;
    Circuit c = compile_head(hp);
    std::vector<BitVec> inputs =
        float_inputs_for(mode, p, static_cast<std::size_t>(n * k), trials, seed);
    auto oracle = [n, k, p, &hp](const BitVec& in) {
        std::vector<FloatP> fs = decode_floats(in, static_cast<std::size_t>(n * k), p);
        std::vector<FVec> X(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i)
            X[static_cast<std::size_t>(i)] =
                FVec(fs.begin() + i * k, fs.begin() + (i + 1) * k);
        std::vector<FVec> Y = head_ref(X, hp.spec, p, HeadMode::two_trunc);
        std::vector<FloatP> flat;
        for (const FVec& v : Y) flat.insert(flat.end(), v.begin(), v.end());
        return encode_floats(flat, p);
    };
    auto cfg = base_config(n, k, p, mode, trials, seed);
    cfg["score"] = hp.spec.describe();
    cfg["literal_levels"] = hp.literal_levels ? "1" : "0";
    return run_verify("head", c, inputs, oracle, std::move(cfg));
}

VerifyReport verify_layer(const Params& base, const LayerSpec& layer, VerifyMode mode,
                          std::uint64_t trials, std::uint64_t seed, std::int64_t ncap) {
    std::int64_t n = base.n, k = base.k;
    int p = base.p;
    Circuit c = compile_layer(base, layer, ncap);
    std::vector<BitVec> inputs =
        float_inputs_for(mode, p, static_cast<std::size_t>(n * k), trials, seed);
    auto oracle = [n, k, p, &layer](const BitVec& in) {
        std::vector<FloatP> fs = decode_floats(in, static_cast<std::size_t>(n * k), p);
        std::vector<FVec> X(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i)
            X[static_cast<std::size_t>(i)] =
                FVec(fs.begin() + i * k, fs.begin() + (i + 1) * k);
        std::vector<FVec> Y = layer_ref(X, layer, k, p);
        std::vector<FloatP> flat;
        for (const FVec& v : Y) flat.insert(flat.end(), v.begin(), v.end());
        return encode_floats(flat, p);
    };
    return run_verify("layer", c, inputs, oracle, base_config(n, k, p, mode, trials, seed));
}

VerifyReport verify_transformer(const Params& base, const ModelSpec& model,
                                VerifyMode mode, std::uint64_t trials,
                                std::uint64_t seed, std::int64_t ncap) {
    std::int64_t n = base.n;
    int p = base.p;
    std::int64_t nsym = static_cast<std::int64_t>(model.alphabet.size());
    int cw = std::max(1, count_width(nsym - 1));
    Circuit c = compile_transformer(base, model, ncap);

    auto word_to_bits = [&](const std::vector<int>& codes) {
        BitVec in(static_cast<std::size_t>(n * cw), 0);
        for (std::int64_t i = 0; i < n; ++i)
            for (int b = 0; b < cw; ++b)
                in[static_cast<std::size_t>(i * cw + b)] = (codes[static_cast<std::size_t>(i)] >> b) & 1;
        return in;
    };
    std::vector<BitVec> inputs;
    if (mode == VerifyMode::exhaustive) {
        double total = 1;
        for (std::int64_t i = 0; i < n; ++i) total *= static_cast<double>(nsym);
        if (total > static_cast<double>(kExhaustiveCap))
            throw config_error("exhaustive word enumeration exceeds cap");
        std::vector<int> codes(static_cast<std::size_t>(n), 0);
        while (true) {
            inputs.push_back(word_to_bits(codes));
            std::int64_t i = 0;
            for (; i < n; ++i) {
                if (++codes[static_cast<std::size_t>(i)] < nsym) break;
                codes[static_cast<std::size_t>(i)] = 0;
            }
            if (i == n) break;
        }
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t t = 0; t < trials; ++t) {
            std::vector<int> codes(static_cast<std::size_t>(n));
            for (auto& cd : codes) cd = static_cast<int>(rng() % nsym);
            inputs.push_back(word_to_bits(codes));
        }
    }
    auto oracle = [&](const BitVec& in) {
        std::string word;
        for (std::int64_t i = 0; i < n; ++i) {
            int code = 0;
            for (int b = 0; b < cw; ++b)
                if (in[static_cast<std::size_t>(i * cw + b)]) code |= 1 << b;
            word += model.alphabet[static_cast<std::size_t>(code)];
        }
        return BitVec{transformer_ref(word, model, p)};
    };
    return run_verify("transformer", c, inputs, oracle,
                      base_config(n, model.k, p, mode, trials, seed));
}

namespace {

Int bits_to_int(const BitVec& in, std::size_t off, std::size_t w) {
    Int v = 0;
    for (std::size_t i = 0; i < w; ++i)
        if (in[off + i]) bit_set(v, static_cast<unsigned>(i));
    return v;
}

BitVec int_to_bits(const Int& v, std::size_t w) {
    BitVec out(w);
    for (std::size_t i = 0; i < w; ++i)
        out[i] = bit_test(v, static_cast<unsigned>(i)) ? 1 : 0;
    return out;
}

std::vector<BitVec> raw_inputs_for(VerifyMode mode, std::size_t width,
                                   std::uint64_t trials, std::uint64_t seed) {
    return mode == VerifyMode::exhaustive ? enumerate_raw_inputs(width)
                                          : random_raw_inputs(width, trials, seed);
}

} // namespace

VerifyReport verify_op(const std::string& name, const OpConfig& cfg) {
    std::int64_t n = cfg.n, k = cfg.k;
    int p = cfg.p;
    auto conf = base_config(n, k, p, cfg.mode, cfg.trials, cfg.seed);
    conf["op"] = name;

    if (name == "sum") {
        Circuit c = synth::float_sum_circuit(n, k, p);
        auto inputs = float_inputs_for(cfg.mode, p, static_cast<std::size_t>(n * k),
                                       cfg.trials, cfg.seed);
        auto oracle = [n, k, p](const BitVec& in) {
            std::vector<FloatP> fs = decode_floats(in, static_cast<std::size_t>(n * k), p);
            std::vector<FVec> X(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i)
                X[static_cast<std::size_t>(i)] =
                    FVec(fs.begin() + i * k, fs.begin() + (i + 1) * k);
            return encode_floats(sum_trunc(X, k, p), p);
        };
        return run_verify("op:sum", c, inputs, oracle, std::move(conf));
    }
    if (name == "div") {
        std::int64_t nmax = cfg.nmax;
        int wd = count_width(nmax);
        conf["nmax"] = std::to_string(nmax);
        Circuit c = synth::float_div_circuit(p, nmax);
        std::vector<BitVec> floats = float_inputs_for(cfg.mode, p, 1, cfg.trials, cfg.seed);
        std::mt19937_64 drng(cfg.seed + 1);
        std::vector<BitVec> inputs;
        for (const BitVec& f : floats) {
            if (cfg.mode == VerifyMode::exhaustive) {
                for (std::int64_t d = 1; d <= nmax; ++d) {
                    BitVec in = f;
                    BitVec db = int_to_bits(Int(d), static_cast<std::size_t>(wd));
                    in.insert(in.end(), db.begin(), db.end());
                    inputs.push_back(std::move(in));
                }
            } else {
                std::int64_t d = 1 + static_cast<std::int64_t>(drng() % nmax);
                BitVec in = f;
                BitVec db = int_to_bits(Int(d), static_cast<std::size_t>(wd));
                in.insert(in.end(), db.begin(), db.end());
                inputs.push_back(std::move(in));
            }
        }
        auto oracle = [p, wd](const BitVec& in) {
            FloatP x = decode(BitVec(in.begin(), in.begin() + p), p);
            std::int64_t d = static_cast<std::int64_t>(
                bits_to_int(in, static_cast<std::size_t>(p), static_cast<std::size_t>(wd)));
            return encode(div_trunc({x}, d, p)[0], p);
        };
        return run_verify("op:div", c, inputs, oracle, std::move(conf));
    }
    if (name == "eq") {
        Circuit c = synth::float_eq_circuit(p);
        auto inputs = float_inputs_for(cfg.mode, p, 2, cfg.trials, cfg.seed);
        auto oracle = [p](const BitVec& in) {
            std::vector<FloatP> fs = decode_floats(in, 2, p);
            return BitVec{eq(fs[0], fs[1]) ? Bit{1} : Bit{0}};
        };
        return run_verify("op:eq", c, inputs, oracle, std::move(conf));
    }
    if (name == "sel") {
        Circuit c = synth::sel_circuit(k, p);
        std::vector<BitVec> floats =
            float_inputs_for(cfg.mode, p, static_cast<std::size_t>(k), cfg.trials, cfg.seed);
        std::vector<BitVec> inputs;
        for (const BitVec& f : floats)
            for (Bit y : {Bit{0}, Bit{1}}) {
                BitVec in = f;
                in.push_back(y);
                inputs.push_back(std::move(in));
            }
        auto oracle = [k, p](const BitVec& in) {
            std::vector<FloatP> fs = decode_floats(in, static_cast<std::size_t>(k), p);
            return encode_floats(sel(fs, in.back()), p);
        };
        return run_verify("op:sel", c, inputs, oracle, std::move(conf));
    }
    if (name == "max") {
        Circuit c = synth::float_max_circuit(n, p);
        auto inputs =
            float_inputs_for(cfg.mode, p, static_cast<std::size_t>(n), cfg.trials, cfg.seed);
        auto oracle = [n, p](const BitVec& in) {
            std::vector<FloatP> fs = decode_floats(in, static_cast<std::size_t>(n), p);
            MaxResult m = max_seq(fs);
            BitVec out = encode(m.maxval, p);
            BitVec ind(static_cast<std::size_t>(n), 0);
            for (std::int64_t j : m.argmax) ind[static_cast<std::size_t>(j - 1)] = 1;
            out.insert(out.end(), ind.begin(), ind.end());
            return out;
        };
        return run_verify("op:max", c, inputs, oracle, std::move(conf));
    }
    if (name == "score") {
        conf["score"] = cfg.spec.describe();
        Circuit c = synth::score_circuit(cfg.spec, k, p);
        auto inputs = float_inputs_for(cfg.mode, p, static_cast<std::size_t>(2 * k),
                                       cfg.trials, cfg.seed);
        auto oracle = [k, p, &cfg](const BitVec& in) {
            std::vector<FloatP> fs = decode_floats(in, static_cast<std::size_t>(2 * k), p);
            FVec x(fs.begin(), fs.begin() + k), xp(fs.begin() + k, fs.end());
            return encode(score(cfg.spec, x, xp, p), p);
        };
        return run_verify("op:score", c, inputs, oracle, std::move(conf));
    }
    if (name == "itadd") {
        std::int64_t rows = cfg.rows;
        int w = cfg.width;
        conf["rows"] = std::to_string(rows);
        conf["width"] = std::to_string(w);
        Circuit c = synth::itadd(rows, w);
        std::size_t nin = static_cast<std::size_t>(rows) * w;
        auto inputs = raw_inputs_for(cfg.mode, nin, cfg.trials, cfg.seed);
        std::size_t wout = c.outputs.size();
        auto oracle = [rows, w, wout](const BitVec& in) {
            Int total = 0;
            for (std::int64_t r = 0; r < rows; ++r)
                total += bits_to_int(in, static_cast<std::size_t>(r * w),
                                     static_cast<std::size_t>(w));
            return int_to_bits(total, wout);
        };
        return run_verify("op:itadd", c, inputs, oracle, std::move(conf));
    }
    if (name == "add2" || name == "sub2" || name == "cmp") {
        int w = cfg.width;
        conf["width"] = std::to_string(w);
        Circuit c = name == "add2" ? synth::add2(w)
                  : name == "sub2" ? synth::sub2(w)
                                   : synth::cmp_fixed(w);
        auto inputs = raw_inputs_for(cfg.mode, static_cast<std::size_t>(2 * w),
                                     cfg.trials, cfg.seed);
        auto oracle = [name, w](const BitVec& in) {
            Int x = bits_to_int(in, 0, static_cast<std::size_t>(w));
            Int y = bits_to_int(in, static_cast<std::size_t>(w), static_cast<std::size_t>(w));
            if (name == "add2") return int_to_bits(x + y, static_cast<std::size_t>(w) + 1);
            if (name == "sub2") {
                BitVec out = int_to_bits(((Int(1) << w) + x - y) & ((Int(1) << w) - 1),
                                         static_cast<std::size_t>(w));
                out.push_back(x < y ? 1 : 0);
                return out;
            }
            return BitVec{x < y ? Bit{1} : Bit{0}, x == y ? Bit{1} : Bit{0},
                          x > y ? Bit{1} : Bit{0}};
        };
        return run_verify("op:" + name, c, inputs, oracle, std::move(conf));
    }
    if (name == "threshold") {
        // Aggregates all thresholds kk in [0, n+1] into one report.
        auto t0 = std::chrono::steady_clock::now();
        VerifyReport r;
        r.target = "op:threshold";
        r.config = std::move(conf);
        auto inputs = raw_inputs_for(cfg.mode, static_cast<std::size_t>(n),
                                     cfg.trials, cfg.seed);
        for (std::int64_t kk = 0; kk <= n + 1; ++kk) {
            Circuit c = synth::threshold_at_least(n, kk);
            std::vector<BitVec> got = eval_batch(c, inputs);
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                std::int64_t pop = 0;
                for (Bit b : inputs[i]) pop += b;
                BitVec want{pop >= kk ? Bit{1} : Bit{0}};
                ++r.trials;
                if (got[i] != want) {
                    ++r.mismatch_count;
                    if (r.mismatches.size() < 10)
                        r.mismatches.push_back({inputs[i], got[i], want});
                }
            }
        }
        r.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }
    if (name == "count") {
        Circuit c = synth::exact_count_bits(n);
        auto inputs = raw_inputs_for(cfg.mode, static_cast<std::size_t>(n),
                                     cfg.trials, cfg.seed);
        std::size_t wout = c.outputs.size();
        auto oracle = [wout](const BitVec& in) {
            std::int64_t pop = 0;
            for (Bit b : in) pop += b;
            return int_to_bits(Int(pop), wout);
        };
        return run_verify("op:count", c, inputs, oracle, std::move(conf));
    }
    throw config_error("unknown op for verification: " + name);
}

std::string GrowthReport::csv() const {
    std::ostringstream os;
    os << "n,p,size,depth";
    if (!rows.empty())
        for (const StageInfo& st : rows[0].stages) os << ',' << st.name;
    os << '\n';
    for (const GrowthRow& r : rows) {
        os << r.n << ',' << r.p << ',' << r.size << ',' << r.depth;
        for (const StageInfo& st : r.stages) os << ',' << st.gates;
        os << '\n';
    }
    return os.str();
}

GrowthReport growth_stats(const HeadParams& base, std::int64_t n_from,
                          std::int64_t n_to) {
    if (n_to - n_from + 1 < 5)
        throw config_error("growth scan needs at least 5 points for the held-out check");
    GrowthReport rep;
    for (std::int64_t n = n_from; n <= n_to; ++n) {
        HeadParams hp = base;
        hp.base.n = n;
        if (hp.base.c0 && hp.base.c1)
            hp.base.p = scheduled_precision(n, *hp.base.c0, *hp.base.c1);
        HeadPlan plan = plan_head(hp);
        GrowthRow row;
        row.n = n;
        row.p = hp.base.p;
        row.size = plan.total_gates;
        row.depth = plan.depth;
        // Positions are structurally identical, so per-stage totals are the
        // first position's counts times n.
        for (const StageInfo& st : plan.stages)
            row.stages.push_back(
                {st.name, st.gates * static_cast<std::uint64_t>(n), st.depth});
        rep.rows.push_back(std::move(row));
    }
    // Lagrange interpolation (degree <= 3) through the first four points.
    const std::size_t m = 4;
    std::vector<Rat> poly(m, Rat(0)); // coefficients, ascending degree
    for (std::size_t i = 0; i < m; ++i) {
        // basis_i(x) = prod_{j != i} (x - n_j) / (n_i - n_j), times size_i
        std::vector<Rat> basis{Rat(1)};
        Rat denom(1);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            Rat nj(rep.rows[j].n);
            std::vector<Rat> next(basis.size() + 1, Rat(0));
            for (std::size_t d = 0; d < basis.size(); ++d) {
                next[d] -= basis[d] * nj;
                next[d + 1] += basis[d];
            }
            basis = std::move(next);
            denom *= Rat(rep.rows[i].n) - nj;
        }
        Rat scale = Rat(static_cast<std::int64_t>(rep.rows[i].size)) / denom;
        for (std::size_t d = 0; d < basis.size(); ++d) poly[d] += basis[d] * scale;
    }
    rep.poly = poly;
    rep.exact_fit = true;
    for (const GrowthRow& r : rep.rows) {
        Rat v(0), x(r.n), xp(1);
        for (const Rat& cfc : poly) {
            v += cfc * xp;
            xp *= x;
        }
        if (v != Rat(static_cast<std::int64_t>(r.size))) rep.exact_fit = false;
    }
    return rep;
}

std::string DemoReport::to_json() const {
    json j;
    j["p"] = p;
    j["all_match"] = all_match;
    json rs = json::array();
    for (const DemoRow& r : rows)
        rs.push_back({{"n", r.n},
                      {"words", r.words},
                      {"circuit_ref_mismatches", r.circuit_ref_mismatches},
                      {"ref_majority_agree", r.ref_majority_agree}});
    j["rows"] = rs;
    return j.dump(2);
}

DemoReport demo_majority(std::int64_t n_max, int p) {
    ModelSpec model = majority_demo_model();
    DemoReport rep;
    rep.p = p;
    rep.all_match = true;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Params base;
        base.n = n;
        base.k = model.k;
        base.p = p;
        Circuit c = compile_transformer(base, model, /*ncap=*/n);
        std::vector<BitVec> inputs;
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
            BitVec in(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = (w >> i) & 1;
            inputs.push_back(std::move(in));
        }
        std::vector<BitVec> got = eval_batch(c, inputs);
        DemoRow row;
        row.n = n;
        row.words = inputs.size();
        for (std::size_t wi = 0; wi < inputs.size(); ++wi) {
            std::string word;
            std::int64_t count_a = 0;
            for (Bit b : inputs[wi]) {
                word += b ? 'b' : 'a';
                count_a += b ? 0 : 1;
            }
            Bit ref = transformer_ref(word, model, p);
            if (got[wi] != BitVec{ref}) ++row.circuit_ref_mismatches;
            Bit majority = 2 * count_a > n ? 1 : 0;
            if (ref == majority) ++row.ref_majority_agree;
        }
        if (row.circuit_ref_mismatches) rep.all_match = false;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace ahac
