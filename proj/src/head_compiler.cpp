#include "ahac/head_compiler.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace ahac {

namespace {

using synth::Cmp3;
using synth::FloatFix;
using synth::MaxOut;

int count_width(std::int64_t v) { // ceil(log2(v+1))
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v)));
}

std::vector<GateId> input_ids(GateId n) {
    std::vector<GateId> v(n);
    std::iota(v.begin(), v.end(), GateId{0});
    return v;
}

} // namespace

std::int64_t HeadParams::resolved_ncap() const {
    std::int64_t r = ncap < 0 ? std::max<std::int64_t>(base.n, 32) : ncap;
    if (r < base.n) throw config_error("ncap must be >= n");
    return r;
}

void HeadParams::validate() const {
    base.validate();
    spec.validate(base.k, base.p);
    std::int64_t r = resolved_ncap();
    if (base.p + count_width(r) > synth::kDefaultLutCap)
        throw config_error("divider table width p + ceil(log2(ncap+1)) exceeds the LUT cap");
}

std::vector<GateId> emit_head(GateSink& s, const HeadParams& hp,
                              std::span<const GateId> X,
                              std::vector<StageInfo>* first_position_stages) {
    hp.validate();
    std::int64_t n = hp.base.n, k = hp.base.k;
    int p = hp.base.p;
    std::int64_t ncap = hp.resolved_ncap();
    int wd = count_width(ncap);
    std::size_t vw = static_cast<std::size_t>(k * p);
    if (X.size() != static_cast<std::size_t>(n) * vw)
        throw config_error("emit_head: expected n*k*p input bits");
    TruthTable div_t = synth::div_truth_table(p, ncap);

    Audit* a = s.audit();
    std::vector<GateId> out;
    out.reserve(X.size());
    std::uint64_t stage_base = s.next_id();
    auto mark = [&](const char* name, std::int64_t i) {
        if (i != 0 || !first_position_stages) return;
        first_position_stages->push_back(
            {name, s.next_id() - stage_base, s.current_depth()});
        stage_base = s.next_id();
    };

    AuditCounter ci(a);
    for (std::int64_t i = 0; i < n; ++i) {
        ci = static_cast<std::uint64_t>(i + 1);
        std::span<const GateId> xi = X.subspan(static_cast<std::size_t>(i) * vw, vw);

        std::vector<std::vector<GateId>> scores;
        {
            AuditCounter cj(a);
            for (std::int64_t j = 0; j < n; ++j) {
                cj = static_cast<std::uint64_t>(j + 1);
                std::vector<GateId> sc = synth::emit_score(
                    s, hp.spec, xi, X.subspan(static_cast<std::size_t>(j) * vw, vw), k, p);
                scores.push_back(std::move(sc));
            }
        }
        mark("scores", i);

        MaxOut m = synth::emit_float_max(s, scores, p);
        mark("max", i);

        std::vector<GateId> ind;
        if (hp.literal_levels) {
            AuditCounter cj(a);
            for (std::int64_t j = 0; j < n; ++j) {
                cj = static_cast<std::uint64_t>(j + 1);
                ind.push_back(synth::emit_float_eq(
                    s, scores[static_cast<std::size_t>(j)], m.max_bits));
            }
            mark("eq", i);
        } else {
            ind = m.indicators;
        }

        std::vector<std::vector<GateId>> masked;
        {
            AuditCounter cj(a);
            for (std::int64_t j = 0; j < n; ++j) {
                cj = static_cast<std::uint64_t>(j + 1);
                std::vector<GateId> mk = synth::emit_sel(
                    s, X.subspan(static_cast<std::size_t>(j) * vw, vw),
                    ind[static_cast<std::size_t>(j)]);
                masked.push_back(std::move(mk));
            }
        }
        mark("select", i);

        std::vector<GateId> summed = synth::emit_float_sum(s, masked, k, p, ncap);
        mark("sum", i);

        std::vector<GateId> cnt = synth::emit_count_capped(s, ind, wd);
        mark("count", i);

        for (std::int64_t c = 0; c < k; ++c) {
            std::vector<GateId> ins(summed.begin() + c * p, summed.begin() + (c + 1) * p);
            ins.insert(ins.end(), cnt.begin(), cnt.end());
            std::vector<GateId> div = synth::emit_lut(s, div_t, ins);
            out.insert(out.end(), div.begin(), div.end());
        }
        mark("divide", i);
    }
    return out;
}

HeadPlan plan_head(const HeadParams& hp) {
    hp.validate();
    GateId nin = static_cast<GateId>(hp.base.n * hp.base.k * hp.base.p);
    PlanSink s(nin);
    HeadPlan plan;
    plan.params = hp;
    emit_head(s, hp, input_ids(nin), &plan.stages);
    plan.total_gates = s.gates();
    plan.depth = s.max_depth();
    return plan;
}

namespace {

// Meta shared by compile_head and emit_streaming. Stage depths are constants
// independent of n (a tested invariant), so a two-position plan supplies
// them without materializing the full-size circuit.
std::map<std::string, std::string> head_meta(const HeadParams& hp) {
    HeadParams small = hp;
    small.ncap = hp.resolved_ncap();
    small.base.n = std::min<std::int64_t>(hp.base.n, 2);
    small.base.c0.reset();
    small.base.c1.reset();
    HeadPlan plan = plan_head(small);
    std::ostringstream st;
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        if (i) st << ';';
        st << plan.stages[i].name << ':' << plan.stages[i].depth;
    }
    return {
        {"generator", "compile_head"},
        {"plan_version", "1"},
        {"n", std::to_string(hp.base.n)},
        {"k", std::to_string(hp.base.k)},
        {"p", std::to_string(hp.base.p)},
        {"ncap", std::to_string(hp.resolved_ncap())},
        {"score", hp.spec.describe()},
        {"literal_levels", hp.literal_levels ? "1" : "0"},
        {"depth", std::to_string(plan.depth)},
        {"stage_depths", st.str()},
    };
}

} // namespace

Circuit compile_head(const HeadParams& hp) {
    hp.validate();
    GateId nin = static_cast<GateId>(hp.base.n * hp.base.k * hp.base.p);
    BuildSink s(nin);
    std::vector<GateId> outs = emit_head(s, hp, input_ids(nin));
    return s.finish(std::move(outs), head_meta(hp), "tc0");
}

AuditStats emit_streaming(const HeadParams& hp, std::ostream& os) {
    hp.validate();
    GateId nin = static_cast<GateId>(hp.base.n * hp.base.k * hp.base.p);
    std::map<std::string, std::string> meta = head_meta(hp);
    AuditStats a{};
    a.gates_emitted = nin; // input gates count toward circuit size
    {
        std::ostringstream h;
        netfmt::header(h, "tc0", nin);
        a.bytes_emitted += h.str().size();
        os << h.str();
    }
    TextSink sink(nin, os, &a);
    std::vector<GateId> outs = emit_head(sink, hp, input_ids(nin));
    {
        std::ostringstream t;
        netfmt::outputs_line(t, outs);
        netfmt::meta_block(t, meta);
        a.bytes_emitted += t.str().size();
        os << t.str();
    }
    return a;
}

namespace {

// value(lhs) > value(rhs) for two canonical encodings (sign-magnitude;
// canonical zero carries a positive sign).
GateId emit_float_gt(GateSink& s, std::span<const GateId> lhs,
                     std::span<const GateId> rhs, int p) {
    FloatFix fa = synth::emit_float_expand(s, lhs, p);
    FloatFix fb = synth::emit_float_expand(s, rhs, p);
    Cmp3 c = synth::emit_cmp_fixed(s, fa.mag, fb.mag);
    GateId nsl = s.emit(Op::NOT, {fa.sign});
    GateId nsr = s.emit(Op::NOT, {fb.sign});
    GateId pp = s.emit(Op::AND, {nsl, nsr, c.gt});
    GateId nn = s.emit(Op::AND, {fa.sign, fb.sign, c.lt});
    GateId pn = s.emit(Op::AND, {nsl, fb.sign});
    return s.emit(Op::OR, {pp, nn, pn});
}

std::vector<GateId> emit_comparator_ffn(GateSink& s, const FfnSpec& f,
                                        std::span<const GateId> concat, std::int64_t k,
                                        int p) {
    GateId gt = emit_float_gt(
        s, concat.subspan(static_cast<std::size_t>(f.lhs * p), static_cast<std::size_t>(p)),
        concat.subspan(static_cast<std::size_t>(f.rhs * p), static_cast<std::size_t>(p)), p);
    GateId ngt = s.emit(Op::NOT, {gt});
    GateId c0 = s.emit(Op::C0, {});
    GateId c1 = s.emit(Op::C1, {});
    std::vector<GateId> out;
    for (std::int64_t c = 0; c < k; ++c) {
        BitVec eg = encode(f.out_gt[static_cast<std::size_t>(c)], p);
        BitVec el = encode(f.out_le[static_cast<std::size_t>(c)], p);
        for (int b = 0; b < p; ++b) {
            if (eg[b] && el[b]) out.push_back(c1);
            else if (!eg[b] && !el[b]) out.push_back(c0);
            else out.push_back(eg[b] ? gt : ngt);
        }
    }
    return out;
}

std::vector<GateId> emit_layer(GateSink& s, const Params& base, const LayerSpec& layer,
                               std::int64_t ncap, bool literal_levels,
                               std::span<const GateId> X) {
    layer.validate(base.k, base.p);
    std::size_t vw = static_cast<std::size_t>(base.k * base.p);
    std::vector<std::vector<GateId>> head_outs;
    for (const ScoreSpec& spec : layer.heads) {
        HeadParams hp;
        hp.base = base;
        hp.spec = spec;
        hp.ncap = ncap;
        hp.literal_levels = literal_levels;
        head_outs.push_back(emit_head(s, hp, X));
    }
    std::vector<GateId> out;
    for (std::int64_t i = 0; i < base.n; ++i) {
        std::vector<GateId> concat;
        for (const auto& ho : head_outs)
            concat.insert(concat.end(), ho.begin() + i * vw, ho.begin() + (i + 1) * vw);
        std::vector<GateId> o;
        if (layer.ffn.kind == FfnSpec::Kind::table)
            o = synth::emit_lut(s, layer.ffn.table, concat);
        else
            o = emit_comparator_ffn(s, layer.ffn, concat, base.k, base.p);
        out.insert(out.end(), o.begin(), o.end());
    }
    return out;
}

} // namespace

Circuit compile_layer(const Params& base, const LayerSpec& layer, std::int64_t ncap,
                      bool literal_levels) {
    base.validate();
    GateId nin = static_cast<GateId>(base.n * base.k * base.p);
    BuildSink s(nin);
    std::vector<GateId> outs = emit_layer(s, base, layer, ncap, literal_levels,
                                          input_ids(nin));
    std::map<std::string, std::string> meta = {
        {"generator", "compile_layer"},
        {"n", std::to_string(base.n)},
        {"k", std::to_string(base.k)},
        {"p", std::to_string(base.p)},
        {"heads", std::to_string(layer.heads.size())},
        {"ffn", layer.ffn.kind == FfnSpec::Kind::table ? "table" : "comparator"},
    };
    return s.finish(std::move(outs), std::move(meta), "tc0");
}

Circuit compile_transformer(const Params& base, const ModelSpec& model,
                            std::int64_t ncap) {
    base.validate();
    if (base.k != model.k)
        throw config_error("compile_transformer: params k must match model k");
    model.validate(base.n, base.p);
    std::int64_t n = base.n, k = base.k;
    int p = base.p;
    std::int64_t nsym = static_cast<std::int64_t>(model.alphabet.size());
    int cw = std::max(1, count_width(nsym - 1));

    BuildSink s(static_cast<GateId>(n * cw));
    std::vector<GateId> cur;
    for (std::int64_t i = 0; i < n; ++i) {
        // Per-position embedding table: symbol code -> encoded F_p^k vector.
        TruthTable emb = synth::tabulate(cw, static_cast<int>(k) * p,
            [&](const BitVec& in) {
                std::int64_t code = 0;
                for (int b = 0; b < cw; ++b)
                    if (in[static_cast<std::size_t>(b)]) code |= std::int64_t{1} << b;
                BitVec row;
                if (code >= nsym) {
                    row.assign(static_cast<std::size_t>(k) * p, 0);
                    return row;
                }
                FVec v = embed_symbol(model, static_cast<int>(code), i + 1, p);
                for (const FloatP& f : v) {
                    BitVec e = encode(f, p);
                    row.insert(row.end(), e.begin(), e.end());
                }
                return row;
            });
        std::vector<GateId> pos_in;
        for (int b = 0; b < cw; ++b)
            pos_in.push_back(static_cast<GateId>(i * cw + b));
        std::vector<GateId> v = synth::emit_lut(s, emb, pos_in);
        cur.insert(cur.end(), v.begin(), v.end());
    }

    for (const LayerSpec& layer : model.layers)
        cur = emit_layer(s, base, layer, ncap, false, cur);

    // Accept iff the readout component at position 1 is strictly positive:
    // positive sign and a nonzero mantissa field.
    std::size_t rb = static_cast<std::size_t>(model.readout_component * p);
    GateId nsign = s.emit(Op::NOT, {cur[rb]});
    std::vector<GateId> mant(cur.begin() + rb + 1, cur.begin() + rb + p / 2);
    GateId nz = s.emit(Op::OR, mant);
    GateId accept = s.emit(Op::AND, {nsign, nz});

    std::map<std::string, std::string> meta = {
        {"generator", "compile_transformer"},
        {"n", std::to_string(n)},
        {"k", std::to_string(k)},
        {"p", std::to_string(p)},
        {"alphabet", std::to_string(nsym)},
        {"layers", std::to_string(model.layers.size())},
    };
    return s.finish({accept}, std::move(meta), "tc0");
}

} // namespace ahac
