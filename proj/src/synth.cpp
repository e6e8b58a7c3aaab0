#include "ahac/synth.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <optional>
#include <ostream>
#include <sstream>

namespace ahac {

void Audit::note(std::uint64_t v) {
    peak_counter_bits = std::max<std::uint64_t>(peak_counter_bits, std::bit_width(v));
}

void Audit::enter() {
    ++live_counters;
    peak_live_counters = std::max(peak_live_counters, live_counters);
}

void Audit::leave() {
    --live_counters;
}

GateId GateSink::emit(Op op, std::span<const GateId> ins) {
    GateId id = next_++;
    on_emit(id, op, ins);
    if (Audit* a = audit()) {
        ++a->gates_emitted;
        a->note(id);
    }
    return id;
}

BuildSink::BuildSink(GateId n_inputs) : GateSink(n_inputs) {
    c_.ops.assign(n_inputs, Op::IN);
    c_.in_off.assign(n_inputs + 1, 0);
    c_.n_inputs = n_inputs;
}

void BuildSink::on_emit(GateId, Op op, std::span<const GateId> ins) {
    c_.ops.push_back(op);
    c_.in_ids.insert(c_.in_ids.end(), ins.begin(), ins.end());
    c_.in_off.push_back(c_.in_ids.size());
}

Circuit BuildSink::finish(std::vector<GateId> outputs, std::map<std::string, std::string> meta,
                          std::string basis) {
    c_.outputs = std::move(outputs);
    c_.meta = std::move(meta);
    c_.basis = std::move(basis);
    validate(c_);
    return std::move(c_);
}

PlanSink::PlanSink(GateId n_inputs) : GateSink(n_inputs) {
    depth_.assign(n_inputs, 0);
}

void PlanSink::on_emit(GateId, Op, std::span<const GateId> ins) {
    std::uint32_t d = 0;
    for (GateId in : ins) d = std::max(d, depth_[in] + 1);
    depth_.push_back(d);
    max_depth_ = std::max<std::size_t>(max_depth_, d);
}

TextSink::TextSink(GateId n_inputs, std::ostream& os, Audit* audit)
    : GateSink(n_inputs), os_(os), audit_(audit) {}

void TextSink::on_emit(GateId id, Op op, std::span<const GateId> ins) {
    std::ostringstream line;
    netfmt::gate_line(line, id, op, ins);
    std::string s = line.str();
    if (audit_) audit_->bytes_emitted += s.size();
    os_ << s;
}

namespace synth {

namespace {

GateId g_c0(GateSink& s) { return s.emit(Op::C0, {}); }
GateId g_c1(GateSink& s) { return s.emit(Op::C1, {}); }
GateId g_not(GateSink& s, GateId a) { return s.emit(Op::NOT, {a}); }

GateId g_and(GateSink& s, std::span<const GateId> ins) {
    if (ins.empty()) throw config_error("AND needs at least one input");
    return s.emit(Op::AND, ins);
}
GateId g_and(GateSink& s, std::initializer_list<GateId> ins) {
    return g_and(s, std::span<const GateId>(ins.begin(), ins.size()));
}
GateId g_or(GateSink& s, std::span<const GateId> ins) {
    if (ins.empty()) throw config_error("OR needs at least one input");
    return s.emit(Op::OR, ins);
}
GateId g_or(GateSink& s, std::initializer_list<GateId> ins) {
    return g_or(s, std::span<const GateId>(ins.begin(), ins.size()));
}

GateId g_xor2(GateSink& s, GateId a, GateId b) {
    GateId na = g_not(s, a), nb = g_not(s, b);
    GateId t1 = g_and(s, {a, nb}), t2 = g_and(s, {na, b});
    return g_or(s, {t1, t2});
}

GateId g_xnor2(GateSink& s, GateId a, GateId b) {
    GateId na = g_not(s, a), nb = g_not(s, b);
    GateId t1 = g_and(s, {a, b}), t2 = g_and(s, {na, nb});
    return g_or(s, {t1, t2});
}

std::vector<GateId> not_layer(GateSink& s, std::span<const GateId> xs) {
    std::vector<GateId> out;
    out.reserve(xs.size());
    for (GateId x : xs) out.push_back(g_not(s, x));
    return out;
}

int ceil_log2(std::int64_t v) { // ceil(log2 v), v >= 1
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v - 1)));
}
int count_width(std::int64_t v) { // ceil(log2(v+1)): bits to hold v
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v)));
}

bool bit_of(const Int& k, int t) {
    return bit_test(k, static_cast<unsigned>(t));
}

// x > K given a precomputed NOT layer aligned with x.
GateId gt_const_with(GateSink& s, std::span<const GateId> x, std::span<const GateId> nx,
                     const Int& K) {
    int w = static_cast<int>(x.size());
    if (K < 0) throw config_error("gt_const: negative constant");
    if (K >= (Int(1) << w) - 1) return g_c0(s); // unreachable strictly-greater
    std::vector<GateId> terms;
    for (int j = 0; j < w; ++j) {
        if (bit_of(K, j)) continue;
        std::vector<GateId> lits{x[j]};
        for (int t = j + 1; t < w; ++t) lits.push_back(bit_of(K, t) ? x[t] : nx[t]);
        terms.push_back(lits.size() == 1 ? lits[0] : g_and(s, lits));
    }
    return g_or(s, terms);
}

GateId eq_const_with(GateSink& s, std::span<const GateId> x, std::span<const GateId> nx,
                     const Int& K) {
    int w = static_cast<int>(x.size());
    if (K < 0 || K >= (Int(1) << w)) return g_c0(s);
    std::vector<GateId> lits;
    for (int t = 0; t < w; ++t) lits.push_back(bit_of(K, t) ? x[t] : nx[t]);
    return g_and(s, lits);
}

} // namespace

TruthTable tabulate(int in_width, int out_width,
                    const std::function<BitVec(const BitVec&)>& fn, int cap) {
    if (in_width > cap)
        throw config_error("LUT input width " + std::to_string(in_width) +
                           " exceeds cap " + std::to_string(cap));
    if (in_width < 0 || out_width < 1) throw config_error("tabulate: bad widths");
    TruthTable t;
    t.in_width = in_width;
    t.out_width = out_width;
    std::size_t total = std::size_t{1} << in_width;
    t.rows.reserve(total);
    BitVec in(in_width, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        for (int i = 0; i < in_width; ++i) in[i] = (idx >> i) & 1;
        BitVec out = fn(in);
        if (static_cast<int>(out.size()) != out_width)
            throw config_error("tabulate: function returned wrong output width");
        t.rows.push_back(std::move(out));
    }
    return t;
}

int expand_width(int p) {
    std::int64_t q = q_of(p);
    return static_cast<int>(2 * q + p / 2 - 1);
}

std::vector<GateId> emit_lut(GateSink& s, const TruthTable& t, std::span<const GateId> ins) {
    t.validate();
    if (static_cast<int>(ins.size()) != t.in_width)
        throw config_error("emit_lut: input width mismatch");
    std::size_t total = t.rows.size();
    // Constant outputs become bare constant gates; everything else is plain
    // DNF: shared NOT layer, one AND per satisfying assignment, one OR.
    std::vector<int> kind(t.out_width); // 0 const0, 1 const1, 2 dnf
    bool any_dnf = false;
    for (int o = 0; o < t.out_width; ++o) {
        std::size_t ones = 0;
        for (const BitVec& row : t.rows) ones += row[o];
        kind[o] = ones == 0 ? 0 : (ones == total ? 1 : 2);
        any_dnf |= kind[o] == 2;
    }
    std::vector<GateId> nots;
    if (any_dnf) nots = not_layer(s, ins);
    std::vector<GateId> out;
    std::vector<GateId> lits(t.in_width);
    for (int o = 0; o < t.out_width; ++o) {
        if (kind[o] == 0) {
            out.push_back(g_c0(s));
            continue;
        }
        if (kind[o] == 1) {
            out.push_back(g_c1(s));
            continue;
        }
        std::vector<GateId> minterms;
        for (std::size_t idx = 0; idx < total; ++idx) {
            if (!t.rows[idx][o]) continue;
            for (int i = 0; i < t.in_width; ++i)
                lits[i] = (idx >> i) & 1 ? ins[i] : nots[i];
            minterms.push_back(g_and(s, lits));
        }
        out.push_back(g_or(s, minterms));
    }
    return out;
}

GateId emit_threshold_at_least(GateSink& s, std::span<const GateId> ins, std::int64_t kk) {
    std::int64_t n = static_cast<std::int64_t>(ins.size());
    if (kk < 0 || kk > n + 1) throw config_error("threshold_at_least: k out of range");
    if (kk == 0) return g_c1(s);
    if (kk == n + 1) return g_c0(s);
    std::int64_t a = std::max<std::int64_t>(0, n - 2 * kk + 1);
    std::int64_t b = std::max<std::int64_t>(0, 2 * kk - 1 - n);
    std::vector<GateId> maj_ins(ins.begin(), ins.end());
    for (std::int64_t i = 0; i < a; ++i) maj_ins.push_back(g_c1(s));
    for (std::int64_t i = 0; i < b; ++i) maj_ins.push_back(g_c0(s));
    return s.emit(Op::MAJ, maj_ins);
}

namespace {

// Shared tail of the exact-count gadgets: thresholds -> "exactly d" -> bits.
std::vector<GateId> count_bits_from_thresholds(GateSink& s, const std::vector<GateId>& th,
                                               std::int64_t n, int width) {
    std::vector<GateId> ex(static_cast<std::size_t>(n) + 1);
    for (std::int64_t d = 1; d < n; ++d) {
        GateId nn = g_not(s, th[static_cast<std::size_t>(d)]); // NOT th(d+1) shifted below
        ex[static_cast<std::size_t>(d)] = g_and(s, {th[static_cast<std::size_t>(d - 1)], nn});
    }
    ex[static_cast<std::size_t>(n)] = th[static_cast<std::size_t>(n - 1)];
    std::vector<GateId> bits;
    for (int b = 0; b < width; ++b) {
        std::vector<GateId> terms;
        for (std::int64_t d = 1; d <= n; ++d)
            if ((d >> b) & 1) terms.push_back(ex[static_cast<std::size_t>(d)]);
        bits.push_back(terms.empty() ? g_c0(s) : g_or(s, terms));
    }
    return bits;
}

} // namespace

std::vector<GateId> emit_exact_count(GateSink& s, std::span<const GateId> ins) {
    std::int64_t n = static_cast<std::int64_t>(ins.size());
    if (n < 1) throw config_error("exact_count: empty input");
    int width = count_width(n);
    std::vector<GateId> th;
    for (std::int64_t d = 1; d <= n; ++d) th.push_back(emit_threshold_at_least(s, ins, d));
    return count_bits_from_thresholds(s, th, n, width);
}

std::vector<GateId> emit_count_capped(GateSink& s, std::span<const GateId> ins,
                                      int cap_width) {
    std::int64_t n = static_cast<std::int64_t>(ins.size());
    if (n < 1) throw config_error("count_capped: empty input");
    if (cap_width < count_width(n))
        throw config_error("count_capped: cap width too small for input count");
    // Padding the input to 2n keeps every threshold's constant count at
    // exactly 2n-2d+1, so gate counts are polynomial in n with no parity
    // or power-of-two jumps (required for the exact size interpolation).
    std::vector<GateId> padded(ins.begin(), ins.end());
    for (std::int64_t i = 0; i < n; ++i) padded.push_back(g_c0(s));
    std::vector<GateId> th;
    for (std::int64_t d = 1; d <= n; ++d) th.push_back(emit_threshold_at_least(s, padded, d));
    return count_bits_from_thresholds(s, th, n, cap_width);
}

std::vector<GateId> emit_add2(GateSink& s, std::span<const GateId> x,
                              std::span<const GateId> y) {
    std::size_t w = x.size();
    if (w == 0 || y.size() != w) throw config_error("add2: width mismatch");
    std::vector<GateId> gen(w), prop(w);
    for (std::size_t j = 0; j < w; ++j) {
        gen[j] = g_and(s, {x[j], y[j]});
        prop[j] = g_or(s, {x[j], y[j]});
    }
    std::vector<GateId> carry(w + 1);
    carry[0] = g_c0(s);
    for (std::size_t i = 1; i <= w; ++i) {
        std::vector<GateId> terms;
        for (std::size_t j = 0; j < i; ++j) {
            if (j == i - 1) {
                terms.push_back(gen[j]);
            } else {
                std::vector<GateId> lits{gen[j]};
                for (std::size_t t = j + 1; t < i; ++t) lits.push_back(prop[t]);
                terms.push_back(g_and(s, lits));
            }
        }
        carry[i] = g_or(s, terms);
    }
    std::vector<GateId> out(w + 1);
    for (std::size_t j = 0; j < w; ++j) {
        GateId h = g_xor2(s, x[j], y[j]);
        out[j] = g_xor2(s, h, carry[j]);
    }
    out[w] = carry[w];
    return out;
}

SubResult emit_sub2(GateSink& s, std::span<const GateId> x, std::span<const GateId> y) {
    std::size_t w = x.size();
    if (w == 0 || y.size() != w) throw config_error("sub2: width mismatch");
    std::vector<GateId> nx = not_layer(s, x), ny = not_layer(s, y);
    std::vector<GateId> gb(w), eqb(w), h(w);
    for (std::size_t j = 0; j < w; ++j) {
        gb[j] = g_and(s, {nx[j], y[j]});
        GateId both = g_and(s, {x[j], y[j]});
        GateId neither = g_and(s, {nx[j], ny[j]});
        eqb[j] = g_or(s, {both, neither});
        GateId t1 = g_and(s, {x[j], ny[j]});
        h[j] = g_or(s, {t1, gb[j]}); // x XOR y
    }
    std::vector<GateId> borrow(w + 1);
    borrow[0] = g_c0(s);
    for (std::size_t i = 1; i <= w; ++i) {
        std::vector<GateId> terms;
        for (std::size_t j = 0; j < i; ++j) {
            if (j == i - 1) {
                terms.push_back(gb[j]);
            } else {
                std::vector<GateId> lits{gb[j]};
                for (std::size_t t = j + 1; t < i; ++t) lits.push_back(eqb[t]);
                terms.push_back(g_and(s, lits));
            }
        }
        borrow[i] = g_or(s, terms);
    }
    SubResult r;
    r.diff.resize(w);
    for (std::size_t j = 0; j < w; ++j) r.diff[j] = g_xor2(s, h[j], borrow[j]);
    r.borrow = borrow[w];
    return r;
}

Cmp3 emit_cmp_fixed(GateSink& s, std::span<const GateId> x, std::span<const GateId> y) {
    std::size_t w = x.size();
    if (w == 0 || y.size() != w) throw config_error("cmp_fixed: width mismatch");
    std::vector<GateId> nx = not_layer(s, x), ny = not_layer(s, y);
    std::vector<GateId> eqb(w);
    for (std::size_t j = 0; j < w; ++j) {
        GateId both = g_and(s, {x[j], y[j]});
        GateId neither = g_and(s, {nx[j], ny[j]});
        eqb[j] = g_or(s, {both, neither});
    }
    Cmp3 r;
    r.eq = g_and(s, eqb);
    std::vector<GateId> gt_terms, lt_terms;
    for (std::size_t j = 0; j < w; ++j) {
        std::vector<GateId> gl{x[j], ny[j]}, ll{nx[j], y[j]};
        for (std::size_t t = j + 1; t < w; ++t) {
            gl.push_back(eqb[t]);
            ll.push_back(eqb[t]);
        }
        gt_terms.push_back(g_and(s, gl));
        lt_terms.push_back(g_and(s, ll));
    }
    r.gt = g_or(s, gt_terms);
    r.lt = g_or(s, lt_terms);
    return r;
}

GateId emit_gt_const(GateSink& s, std::span<const GateId> x, const Int& K) {
    std::vector<GateId> nx = not_layer(s, x);
    return gt_const_with(s, x, nx, K);
}

namespace {

// LUT summing `b` b-bit column counts with weights 2^u (stage 2 of itadd).
TruthTable block_sum_table(int b, int cap) {
    return tabulate(b * b, 2 * b, [b](const BitVec& in) {
        std::uint64_t total = 0;
        for (int u = 0; u < b; ++u) {
            std::uint64_t v = 0;
            for (int t = 0; t < b; ++t)
                if (in[u * b + t]) v |= std::uint64_t{1} << t;
            total += v << u;
        }
        BitVec out(2 * b, 0);
        for (int t = 0; t < 2 * b; ++t) out[t] = (total >> t) & 1;
        return out;
    }, cap);
}

} // namespace

std::vector<GateId> emit_itadd(GateSink& s, const std::vector<std::vector<GateId>>& rows,
                               std::int64_t rcap) {
    std::int64_t R = static_cast<std::int64_t>(rows.size());
    if (R < 1) throw config_error("itadd: needs at least one row");
    if (rcap < 0) rcap = R;
    if (R > rcap) throw config_error("itadd: more rows than rcap");
    std::size_t wd = rows[0].size();
    if (wd == 0) throw config_error("itadd: empty rows");
    for (const auto& r : rows)
        if (r.size() != wd) throw config_error("itadd: ragged rows");
    std::size_t wout = wd + static_cast<std::size_t>(ceil_log2(rcap)) + 1;

    if (R == 1) {
        GateId zero = g_c0(s);
        std::vector<GateId> out(rows[0]);
        while (out.size() < wout) out.push_back(zero);
        return out;
    }

    GateId zero = g_c0(s);
    int lc = count_width(rcap);

    // Stage 1: per-column counts, regrouped by bit index into lc rows.
    std::vector<std::vector<GateId>> cnt(wd);
    for (std::size_t c = 0; c < wd; ++c) {
        std::vector<GateId> col;
        for (const auto& r : rows) col.push_back(r[c]);
        cnt[c] = emit_count_capped(s, col, lc);
    }
    std::size_t w1 = wd + lc - 1;
    auto regrouped = [&](int t, std::size_t pos) -> GateId {
        if (pos < static_cast<std::size_t>(t)) return zero;
        std::size_t c = pos - static_cast<std::size_t>(t);
        return c < wd ? cnt[c][static_cast<std::size_t>(t)] : zero;
    };

    // Stage 2: block-save reduction of the lc rows to two rows.
    int b = count_width(lc);
    std::size_t nblocks = (w1 + b - 1) / b;
    std::size_t w2 = nblocks * b;
    std::size_t w3 = w2 + b;
    TruthTable blk = block_sum_table(b, kDefaultLutCap);
    std::vector<GateId> rowA(w3, zero), rowB(w3, zero);
    for (std::size_t B = 0; B < nblocks; ++B) {
        std::vector<GateId> lut_in;
        for (int u = 0; u < b; ++u) {
            std::size_t pos = B * b + u;
            std::vector<GateId> col;
            for (int t = 0; t < lc; ++t)
                col.push_back(pos < w1 ? regrouped(t, pos) : zero);
            std::vector<GateId> cc = emit_count_capped(s, col, b);
            lut_in.insert(lut_in.end(), cc.begin(), cc.end());
        }
        std::vector<GateId> sum = emit_lut(s, blk, lut_in);
        for (int u = 0; u < b; ++u) {
            rowA[B * b + u] = sum[static_cast<std::size_t>(u)];
            rowB[(B + 1) * b + u] = sum[static_cast<std::size_t>(b + u)];
        }
    }

    // Stage 3: one carry-lookahead addition.
    std::vector<GateId> total = emit_add2(s, rowA, rowB);
    std::vector<GateId> out(total.begin(), total.begin() + std::min(wout, total.size()));
    while (out.size() < wout) out.push_back(zero);
    return out;
}

FloatFix emit_float_expand(GateSink& s, std::span<const GateId> enc, int p) {
    std::int64_t q = q_of(p);
    int half = p / 2;
    if (static_cast<int>(enc.size()) != p) throw config_error("float_expand: width mismatch");
    int w_total = expand_width(p);
    std::span<const GateId> expf = enc.subspan(static_cast<std::size_t>(half));
    std::vector<GateId> nexp = not_layer(s, expf);
    // One equality gate per exponent value, matching its canonical encoding.
    std::vector<GateId> eq_e(static_cast<std::size_t>(2 * q + 1));
    for (std::int64_t e = -q; e <= q; ++e) {
        std::vector<GateId> lits;
        lits.push_back(e < 0 ? expf[0] : nexp[0]);
        std::int64_t mag = e < 0 ? -e : e;
        for (int t = 0; t < half - 1; ++t)
            lits.push_back((mag >> t) & 1 ? expf[1 + t] : nexp[1 + t]);
        eq_e[static_cast<std::size_t>(e + q)] = g_and(s, lits);
    }
    FloatFix out;
    out.sign = enc[0];
    out.mag.resize(static_cast<std::size_t>(w_total));
    for (int w = 0; w < w_total; ++w) {
        std::vector<GateId> terms;
        for (std::int64_t e = -q; e <= q; ++e) {
            std::int64_t t = w - (e + q);
            if (t < 0 || t >= half - 1) continue;
            terms.push_back(g_and(s, {eq_e[static_cast<std::size_t>(e + q)],
                                      enc[static_cast<std::size_t>(1 + t)]}));
        }
        out.mag[static_cast<std::size_t>(w)] = g_or(s, terms);
    }
    return out;
}

std::vector<GateId> emit_fixed_to_float(GateSink& s, GateId sign,
                                        std::span<const GateId> mag, int p,
                                        std::int64_t e0) {
    std::int64_t q = q_of(p);
    int half = p / 2;
    if (e0 > -q) throw config_error("fixed_to_float: layout must have e0 <= -q");
    int wm = static_cast<int>(mag.size());
    if (wm < 1) throw config_error("fixed_to_float: empty magnitude");

    std::vector<GateId> nmag = not_layer(s, mag);
    GateId ovf = gt_const_with(s, mag, nmag, Int(q) << (q - e0));

    // Feasibility per candidate exponent shift; monotone non-increasing in z.
    std::vector<GateId> feas(static_cast<std::size_t>(2 * q + 1));
    for (std::int64_t z = -q; z <= q; ++z) {
        GateId gt = gt_const_with(s, mag, nmag, Int(q) << (-z - e0));
        feas[static_cast<std::size_t>(z + q)] = g_not(s, gt);
    }
    std::vector<GateId> sel(static_cast<std::size_t>(2 * q + 1));
    for (std::int64_t z = -q; z <= q; ++z) {
        if (z < q) {
            GateId nf = g_not(s, feas[static_cast<std::size_t>(z + 1 + q)]);
            sel[static_cast<std::size_t>(z + q)] =
                g_and(s, {feas[static_cast<std::size_t>(z + q)], nf});
        } else {
            sel[static_cast<std::size_t>(z + q)] = feas[static_cast<std::size_t>(z + q)];
        }
    }

    // With maximal z the raw mantissa is canonical except for one possible
    // doubling, exactly when m = (q-1)/2 and z < q.
    std::int64_t md = (q - 1) / 2;
    bool have_nd = q >= 3;
    std::vector<GateId> nd(static_cast<std::size_t>(2 * q + 1), 0);
    std::vector<bool> nd_valid(static_cast<std::size_t>(2 * q + 1), false);
    std::vector<GateId> gated(static_cast<std::size_t>(2 * q + 1));
    for (std::int64_t z = -q; z <= q; ++z) {
        std::size_t zi = static_cast<std::size_t>(z + q);
        std::int64_t shift = -z - e0;
        if (have_nd && z < q) {
            std::vector<GateId> lits{sel[zi]};
            bool impossible = false;
            for (int t = 0; t < half - 1; ++t) {
                std::int64_t pos = shift + t;
                bool bit = (md >> t) & 1;
                if (pos >= wm) {
                    if (bit) impossible = true;
                    continue; // out-of-window zero matches a zero bit
                }
                lits.push_back(bit ? mag[static_cast<std::size_t>(pos)]
                                   : nmag[static_cast<std::size_t>(pos)]);
            }
            nd[zi] = impossible ? g_c0(s) : g_and(s, lits);
            nd_valid[zi] = true;
            GateId nnd = g_not(s, nd[zi]);
            gated[zi] = g_and(s, {sel[zi], nnd});
        } else {
            gated[zi] = sel[zi];
        }
    }

    auto or_or_c0 = [&](std::vector<GateId>& terms) {
        return terms.empty() ? g_c0(s) : g_or(s, terms);
    };

    std::vector<GateId> mant_raw(static_cast<std::size_t>(half - 1));
    for (int t = 0; t < half - 1; ++t) {
        std::vector<GateId> terms;
        for (std::int64_t z = -q; z <= q; ++z) {
            std::size_t zi = static_cast<std::size_t>(z + q);
            std::int64_t pos = (-z - e0) + t;
            if (pos < wm)
                terms.push_back(g_and(s, {gated[zi], mag[static_cast<std::size_t>(pos)]}));
            if (nd_valid[zi] && (((q - 1) >> t) & 1)) terms.push_back(nd[zi]);
        }
        mant_raw[static_cast<std::size_t>(t)] = or_or_c0(terms);
    }
    std::vector<GateId> esign_terms;
    for (std::int64_t z = -q; z <= q; ++z) {
        std::size_t zi = static_cast<std::size_t>(z + q);
        if (z > 0) esign_terms.push_back(gated[zi]); // E = -z < 0
        if (nd_valid[zi] && z >= 0) esign_terms.push_back(nd[zi]); // E = -(z+1) < 0
    }
    GateId esign_raw = or_or_c0(esign_terms);
    std::vector<GateId> emag_raw(static_cast<std::size_t>(half - 1));
    for (int t = 0; t < half - 1; ++t) {
        std::vector<GateId> terms;
        for (std::int64_t z = -q; z <= q; ++z) {
            std::size_t zi = static_cast<std::size_t>(z + q);
            std::int64_t eg = z < 0 ? -z : z; // |E| for the undoubled result
            if ((eg >> t) & 1) terms.push_back(gated[zi]);
            if (nd_valid[zi]) {
                std::int64_t en = z + 1 < 0 ? -(z + 1) : z + 1;
                if ((en >> t) & 1) terms.push_back(nd[zi]);
            }
        }
        emag_raw[static_cast<std::size_t>(t)] = or_or_c0(terms);
    }

    GateId nonzero = g_or(s, mant_raw);

    // Overflow clamps to q*2^q whose mantissa and |exponent| are all ones.
    std::vector<GateId> out(static_cast<std::size_t>(p));
    GateId s_ovf = g_and(s, {ovf, sign});
    GateId s_norm = g_and(s, {sign, nonzero});
    out[0] = g_or(s, {s_ovf, s_norm});
    for (int t = 0; t < half - 1; ++t)
        out[static_cast<std::size_t>(1 + t)] =
            g_or(s, {mant_raw[static_cast<std::size_t>(t)], ovf});
    out[static_cast<std::size_t>(half)] = g_and(s, {esign_raw, nonzero});
    for (int t = 0; t < half - 1; ++t) {
        GateId gatedmag = g_and(s, {emag_raw[static_cast<std::size_t>(t)], nonzero});
        out[static_cast<std::size_t>(half + 1 + t)] = g_or(s, {gatedmag, ovf});
    }
    return out;
}

GateId emit_float_eq(GateSink& s, std::span<const GateId> a, std::span<const GateId> b) {
    if (a.size() != b.size() || a.empty()) throw config_error("float_eq: width mismatch");
    std::vector<GateId> xn;
    for (std::size_t i = 0; i < a.size(); ++i) xn.push_back(g_xnor2(s, a[i], b[i]));
    return g_and(s, xn);
}

std::vector<GateId> emit_sel(GateSink& s, std::span<const GateId> bits, GateId y) {
    std::vector<GateId> out;
    for (GateId b : bits) out.push_back(g_and(s, {b, y}));
    return out;
}

MaxOut emit_float_max(GateSink& s, const std::vector<std::vector<GateId>>& encs, int p) {
    std::size_t n = encs.size();
    if (n == 0) throw config_error("float_max: empty input");
    for (const auto& e : encs)
        if (static_cast<int>(e.size()) != p) throw config_error("float_max: width mismatch");

    std::vector<FloatFix> fx;
    for (const auto& e : encs) fx.push_back(emit_float_expand(s, e, p));
    std::vector<GateId> nsign;
    for (const auto& f : fx) nsign.push_back(g_not(s, f.sign));

    // ge[j][t] = value_j >= value_t by sign-magnitude comparison (canonical
    // zero is +0, so sign=1 implies strictly negative).
    std::vector<std::vector<GateId>> ge(n, std::vector<GateId>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < n; ++t) {
            Cmp3 c = emit_cmp_fixed(s, fx[j].mag, fx[t].mag);
            GateId geq = g_or(s, {c.gt, c.eq});
            GateId leq = g_or(s, {c.lt, c.eq});
            GateId pp = g_and(s, {nsign[j], nsign[t], geq});
            GateId nn = g_and(s, {fx[j].sign, fx[t].sign, leq});
            GateId pn = g_and(s, {nsign[j], fx[t].sign});
            ge[j][t] = g_or(s, {pp, nn, pn});
        }

    MaxOut out;
    out.indicators.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.indicators[j] = g_and(s, ge[j]);
    out.max_bits.resize(static_cast<std::size_t>(p));
    for (int b = 0; b < p; ++b) {
        std::vector<GateId> terms;
        for (std::size_t j = 0; j < n; ++j)
            terms.push_back(g_and(s, {encs[j][static_cast<std::size_t>(b)],
                                      out.indicators[j]}));
        out.max_bits[static_cast<std::size_t>(b)] = g_or(s, terms);
    }
    return out;
}

namespace {

// Signed fixed-point value produced by a sub-gadget.
struct SignedFix {
    GateId sign;
    std::vector<GateId> mag;
};

// |P - N| plus the result sign from two unsigned accumulations.
SignedFix emit_signed_diff(GateSink& s, const std::vector<GateId>& pos,
                           const std::vector<GateId>& neg) {
    Cmp3 c = emit_cmp_fixed(s, pos, neg);
    SubResult d1 = emit_sub2(s, pos, neg);
    SubResult d2 = emit_sub2(s, neg, pos);
    GateId nlt = g_not(s, c.lt);
    SignedFix r;
    r.sign = c.lt;
    for (std::size_t w = 0; w < pos.size(); ++w) {
        GateId a = g_and(s, {nlt, d1.diff[w]});
        GateId b = g_and(s, {c.lt, d2.diff[w]});
        r.mag.push_back(g_or(s, {a, b}));
    }
    return r;
}

// Accumulate sign-gated magnitude rows into positive/negative totals of a
// fixed output width, tolerating generation-time-empty row sets.
std::vector<GateId> itadd_or_zero(GateSink& s, const std::vector<std::vector<GateId>>& rows,
                                  std::size_t wd, std::int64_t rcap, std::size_t wout) {
    if (rows.empty()) {
        GateId zero = g_c0(s);
        return std::vector<GateId>(wout, zero);
    }
    std::vector<GateId> r = emit_itadd(s, rows, rcap);
    if (r.size() != wout) throw config_error("itadd_or_zero: width bookkeeping error");
    (void)wd;
    return r;
}

// School multiplication of two unsigned magnitudes.
std::vector<GateId> emit_mul_mag(GateSink& s, std::span<const GateId> a,
                                 std::span<const GateId> b) {
    std::size_t wa = a.size(), wb = b.size();
    std::size_t wp = wa + wb;
    GateId zero = g_c0(s);
    std::vector<std::vector<GateId>> rows;
    for (std::size_t u = 0; u < wa; ++u) {
        std::vector<GateId> row(wp, zero);
        for (std::size_t v = 0; v < wb; ++v) row[u + v] = g_and(s, {a[u], b[v]});
        rows.push_back(std::move(row));
    }
    std::vector<GateId> prod = emit_itadd(s, rows, static_cast<std::int64_t>(wa));
    prod.resize(wp); // true product fits in wa+wb bits
    return prod;
}

// Exact signed fixed-point rendering (layout e0 = -q) of a float encoding
// times an integer constant; rows are appended to pos/neg accumulators.
void append_const_mul_rows(GateSink& s, const FloatFix& x, GateId nsign,
                           std::int64_t coef, std::size_t wq,
                           std::vector<std::vector<GateId>>& posrows,
                           std::vector<std::vector<GateId>>& negrows, GateId zero) {
    if (coef == 0) return;
    bool neg_coef = coef < 0;
    std::uint64_t a = static_cast<std::uint64_t>(neg_coef ? -coef : coef);
    for (int t = 0; a >> t; ++t) {
        if (!((a >> t) & 1)) continue;
        // Contribution sign is x's sign flipped by the coefficient sign, so
        // gate one shifted copy into each accumulator.
        GateId gate_pos = neg_coef ? x.sign : nsign;
        GateId gate_neg = neg_coef ? nsign : x.sign;
        std::vector<GateId> rp(wq, zero), rn(wq, zero);
        for (std::size_t w = 0; w < x.mag.size(); ++w) {
            rp[w + t] = g_and(s, {x.mag[w], gate_pos});
            rn[w + t] = g_and(s, {x.mag[w], gate_neg});
        }
        posrows.push_back(std::move(rp));
        negrows.push_back(std::move(rn));
    }
}

std::vector<GateId> emit_score_dot(GateSink& s, std::span<const GateId> xa,
                                   std::span<const GateId> xb, std::int64_t k, int p) {
    std::int64_t q = q_of(p);
    int half = p / 2;
    int mb = half - 1;
    std::size_t wp = static_cast<std::size_t>(2 * mb);
    std::size_t wc = static_cast<std::size_t>(4 * q) + wp;
    std::size_t ws = wc + static_cast<std::size_t>(ceil_log2(k)) + 1;

    // Biased exponent (E + q) from a canonical exponent field.
    TruthTable bias = tabulate(half, half, [q, half](const BitVec& in) {
        bool esign = in[0] != 0;
        std::int64_t emag = 0;
        for (int t = 0; t < half - 1; ++t)
            if (in[1 + t]) emag |= std::int64_t{1} << t;
        std::int64_t biased = (esign ? -emag : emag) + q;
        BitVec out(half, 0);
        if (biased >= 0)
            for (int t = 0; t < half; ++t) out[t] = (biased >> t) & 1;
        return out;
    });

    GateId zero = g_c0(s);
    std::vector<std::vector<GateId>> posrows, negrows;
    for (std::int64_t c = 0; c < k; ++c) {
        std::span<const GateId> fa = xa.subspan(static_cast<std::size_t>(c * p),
                                                static_cast<std::size_t>(p));
        std::span<const GateId> fb = xb.subspan(static_cast<std::size_t>(c * p),
                                                static_cast<std::size_t>(p));
        // Mantissa product.
        std::vector<GateId> prod =
            emit_mul_mag(s, fa.subspan(1, static_cast<std::size_t>(mb)),
                         fb.subspan(1, static_cast<std::size_t>(mb)));
        // Exponent sum, biased by 2q.
        std::vector<GateId> ea =
            emit_lut(s, bias, fa.subspan(static_cast<std::size_t>(half)));
        std::vector<GateId> eb =
            emit_lut(s, bias, fb.subspan(static_cast<std::size_t>(half)));
        std::vector<GateId> esum = emit_add2(s, ea, eb);
        std::vector<GateId> nesum = not_layer(s, esum);
        std::vector<GateId> eq_e(static_cast<std::size_t>(4 * q + 1));
        for (std::int64_t e = 0; e <= 4 * q; ++e)
            eq_e[static_cast<std::size_t>(e)] = eq_const_with(s, esum, nesum, Int(e));
        // Shift the product into the shared e0 = -2q layout.
        std::vector<GateId> shifted(wc);
        for (std::size_t w = 0; w < wc; ++w) {
            std::vector<GateId> terms;
            for (std::int64_t e = 0; e <= 4 * q; ++e) {
                std::int64_t v = static_cast<std::int64_t>(w) - e;
                if (v < 0 || v >= static_cast<std::int64_t>(wp)) continue;
                terms.push_back(g_and(s, {eq_e[static_cast<std::size_t>(e)],
                                          prod[static_cast<std::size_t>(v)]}));
            }
            shifted[w] = terms.empty() ? zero : g_or(s, terms);
        }
        GateId csign = g_xor2(s, fa[0], fb[0]);
        GateId ncsign = g_not(s, csign);
        std::vector<GateId> rp(wc), rn(wc);
        for (std::size_t w = 0; w < wc; ++w) {
            rp[w] = g_and(s, {shifted[w], ncsign});
            rn[w] = g_and(s, {shifted[w], csign});
        }
        posrows.push_back(std::move(rp));
        negrows.push_back(std::move(rn));
    }
    std::vector<GateId> P = emit_itadd(s, posrows, k);
    std::vector<GateId> N = emit_itadd(s, negrows, k);
    if (P.size() != ws || N.size() != ws)
        throw config_error("score: accumulator width bookkeeping error");
    SignedFix d = emit_signed_diff(s, P, N);
    return emit_fixed_to_float(s, d.sign, d.mag, p, -2 * q);
}

std::vector<GateId> emit_score_bilinear(GateSink& s, const ScoreSpec& spec,
                                        std::span<const GateId> xa,
                                        std::span<const GateId> xb, std::int64_t k, int p) {
    std::int64_t q = q_of(p);
    int w_exp = expand_width(p);
    std::int64_t maxc = 1;
    for (const auto* m : {&spec.Q, &spec.K})
        for (const auto& row : *m)
            for (std::int64_t e : row) maxc = std::max(maxc, e < 0 ? -e : e);
    int cb = count_width(maxc);
    std::size_t wq = static_cast<std::size_t>(w_exp + cb);
    std::int64_t rcap_lin = k * cb;
    std::size_t wy = wq + static_cast<std::size_t>(ceil_log2(rcap_lin)) + 1;

    GateId zero = g_c0(s);
    // Rows with identically-zero coefficients are dropped at generation time
    // (nullopt), so zero Q/K matrices compile to near-constant circuits.
    auto linear = [&](const std::vector<std::vector<std::int64_t>>& M,
                      std::span<const GateId> xv) {
        std::vector<FloatFix> fx;
        std::vector<GateId> ns;
        for (std::int64_t c = 0; c < k; ++c) {
            fx.push_back(emit_float_expand(
                s, xv.subspan(static_cast<std::size_t>(c * p), static_cast<std::size_t>(p)),
                p));
            ns.push_back(g_not(s, fx.back().sign));
        }
        std::vector<std::optional<SignedFix>> y;
        for (std::int64_t r = 0; r < k; ++r) {
            std::vector<std::vector<GateId>> posrows, negrows;
            for (std::int64_t c = 0; c < k; ++c)
                append_const_mul_rows(s, fx[static_cast<std::size_t>(c)],
                                      ns[static_cast<std::size_t>(c)],
                                      M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                      wq, posrows, negrows, zero);
            if (posrows.empty() && negrows.empty()) {
                y.push_back(std::nullopt);
                continue;
            }
            std::vector<GateId> P = itadd_or_zero(s, posrows, wq, rcap_lin, wy);
            std::vector<GateId> N = itadd_or_zero(s, negrows, wq, rcap_lin, wy);
            y.push_back(emit_signed_diff(s, P, N));
        }
        return y;
    };
    std::vector<std::optional<SignedFix>> y = linear(spec.Q, xa);
    std::vector<std::optional<SignedFix>> z = linear(spec.K, xb);

    std::size_t wprod = 2 * wy;
    std::size_t wsum = wprod + static_cast<std::size_t>(ceil_log2(k)) + 1;
    std::vector<std::vector<GateId>> posrows, negrows;
    for (std::int64_t r = 0; r < k; ++r) {
        const auto& yr = y[static_cast<std::size_t>(r)];
        const auto& zr = z[static_cast<std::size_t>(r)];
        if (!yr || !zr) continue; // component product is identically zero
        std::vector<GateId> prod = emit_mul_mag(s, yr->mag, zr->mag);
        GateId psign = g_xor2(s, yr->sign, zr->sign);
        GateId npsign = g_not(s, psign);
        std::vector<GateId> rp(wprod), rn(wprod);
        for (std::size_t w = 0; w < wprod; ++w) {
            rp[w] = g_and(s, {prod[w], npsign});
            rn[w] = g_and(s, {prod[w], psign});
        }
        posrows.push_back(std::move(rp));
        negrows.push_back(std::move(rn));
    }
    if (posrows.empty()) {
        std::vector<GateId> zmag(wsum, zero);
        return emit_fixed_to_float(s, zero, zmag, p, -2 * q);
    }
    std::vector<GateId> P = emit_itadd(s, posrows, k);
    std::vector<GateId> N = emit_itadd(s, negrows, k);
    P.resize(wsum, zero);
    N.resize(wsum, zero);
    SignedFix d = emit_signed_diff(s, P, N);
    return emit_fixed_to_float(s, d.sign, d.mag, p, -2 * q);
}

} // namespace

std::vector<GateId> emit_score(GateSink& s, const ScoreSpec& spec,
                               std::span<const GateId> xa, std::span<const GateId> xb,
                               std::int64_t k, int p, int lut_cap) {
    spec.validate(k, p);
    if (xa.size() != static_cast<std::size_t>(k * p) || xb.size() != xa.size())
        throw config_error("score: input width mismatch");
    switch (spec.kind) {
        case ScoreSpec::Kind::dot: return emit_score_dot(s, xa, xb, k, p);
        case ScoreSpec::Kind::bilinear: return emit_score_bilinear(s, spec, xa, xb, k, p);
        case ScoreSpec::Kind::table: {
            if (spec.table.in_width > lut_cap)
                throw config_error("table score exceeds LUT cap");
            std::vector<GateId> ins(xa.begin(), xa.end());
            ins.insert(ins.end(), xb.begin(), xb.end());
            return emit_lut(s, spec.table, ins);
        }
    }
    throw config_error("score: unknown kind");
}

std::vector<GateId> emit_float_sum(GateSink& s,
                                   const std::vector<std::vector<GateId>>& vec_encs,
                                   std::int64_t k, int p, std::int64_t ncap) {
    std::int64_t q = q_of(p);
    std::int64_t n = static_cast<std::int64_t>(vec_encs.size());
    if (n < 1) throw config_error("float_sum: empty input");
    if (ncap < n) throw config_error("float_sum: ncap smaller than row count");
    for (const auto& v : vec_encs)
        if (v.size() != static_cast<std::size_t>(k * p))
            throw config_error("float_sum: vector width mismatch");
    std::size_t w_exp = static_cast<std::size_t>(expand_width(p));
    std::size_t ws = w_exp + static_cast<std::size_t>(ceil_log2(ncap)) + 1;

    std::vector<GateId> out;
    for (std::int64_t c = 0; c < k; ++c) {
        std::vector<std::vector<GateId>> posrows, negrows;
        for (std::int64_t j = 0; j < n; ++j) {
            FloatFix f = emit_float_expand(
                s,
                std::span<const GateId>(vec_encs[static_cast<std::size_t>(j)])
                    .subspan(static_cast<std::size_t>(c * p), static_cast<std::size_t>(p)),
                p);
            GateId nsig = g_not(s, f.sign);
            std::vector<GateId> rp(w_exp), rn(w_exp);
            for (std::size_t w = 0; w < w_exp; ++w) {
                rp[w] = g_and(s, {f.mag[w], nsig});
                rn[w] = g_and(s, {f.mag[w], f.sign});
            }
            posrows.push_back(std::move(rp));
            negrows.push_back(std::move(rn));
        }
        std::vector<GateId> P = emit_itadd(s, posrows, ncap);
        std::vector<GateId> N = emit_itadd(s, negrows, ncap);
        if (P.size() != ws) throw config_error("float_sum: width bookkeeping error");
        SignedFix d = emit_signed_diff(s, P, N);
        std::vector<GateId> enc = emit_fixed_to_float(s, d.sign, d.mag, p, -q);
        out.insert(out.end(), enc.begin(), enc.end());
    }
    return out;
}

TruthTable div_truth_table(int p, std::int64_t nmax, int cap) {
    if (nmax < 1) throw config_error("float_div: nmax must be >= 1");
    int wd = count_width(nmax);
    return tabulate(p + wd, p, [p, nmax, wd](const BitVec& in) {
        BitVec xb(in.begin(), in.begin() + p);
        std::int64_t dv = 0;
        for (int t2 = 0; t2 < wd; ++t2)
            if (in[p + t2]) dv |= std::int64_t{1} << t2;
        BitVec zero(static_cast<std::size_t>(p), 0);
        if (dv < 1 || dv > nmax) return zero; // caller guarantees |M| in [1, n]
        FloatP xf;
        try {
            xf = decode(xb, p);
        } catch (const config_error&) {
            return zero; // non-canonical inputs never reach generated circuits
        }
        return encode(div_trunc({xf}, dv, p)[0], p);
    }, cap);
}

std::vector<GateId> emit_float_div(GateSink& s, std::span<const GateId> x,
                                   std::span<const GateId> d, int p, std::int64_t nmax,
                                   int lut_cap) {
    TruthTable t = div_truth_table(p, nmax, lut_cap);
    if (static_cast<int>(x.size()) != p ||
        static_cast<int>(d.size()) != t.in_width - p)
        throw config_error("float_div: input width mismatch");
    std::vector<GateId> ins(x.begin(), x.end());
    ins.insert(ins.end(), d.begin(), d.end());
    return emit_lut(s, t, ins);
}

// ---- standalone circuit generators ----

namespace {

std::vector<GateId> input_ids(GateId n) {
    std::vector<GateId> v(n);
    for (GateId i = 0; i < n; ++i) v[i] = i;
    return v;
}

std::map<std::string, std::string> base_meta(const std::string& generator) {
    return {{"generator", generator}, {"version", "1"}};
}

} // namespace

Circuit lut_compile(const TruthTable& t) {
    t.validate();
    if (t.in_width > kDefaultLutCap)
        throw config_error("lut_compile: input width exceeds cap");
    BuildSink s(static_cast<GateId>(t.in_width));
    std::vector<GateId> ins = input_ids(static_cast<GateId>(t.in_width));
    std::vector<GateId> outs = emit_lut(s, t, ins);
    auto meta = base_meta("lut_compile");
    meta["in_width"] = std::to_string(t.in_width);
    return s.finish(outs, std::move(meta), "ac0");
}

Circuit threshold_at_least(std::int64_t n, std::int64_t kk) {
    if (n < 1) throw config_error("threshold_at_least: n must be positive");
    BuildSink s(static_cast<GateId>(n));
    GateId out = emit_threshold_at_least(s, input_ids(static_cast<GateId>(n)), kk);
    auto meta = base_meta("threshold_at_least");
    meta["n"] = std::to_string(n);
    meta["k"] = std::to_string(kk);
    return s.finish({out}, std::move(meta));
}

Circuit exact_count_bits(std::int64_t n) {
    if (n < 1) throw config_error("exact_count_bits: n must be positive");
    BuildSink s(static_cast<GateId>(n));
    std::vector<GateId> outs = emit_exact_count(s, input_ids(static_cast<GateId>(n)));
    auto meta = base_meta("exact_count_bits");
    meta["n"] = std::to_string(n);
    return s.finish(outs, std::move(meta));
}

Circuit add2(int width) {
    if (width < 1) throw config_error("add2: width must be positive");
    BuildSink s(static_cast<GateId>(2 * width));
    std::vector<GateId> all = input_ids(static_cast<GateId>(2 * width));
    std::span<const GateId> x(all.data(), static_cast<std::size_t>(width));
    std::span<const GateId> y(all.data() + width, static_cast<std::size_t>(width));
    std::vector<GateId> outs = emit_add2(s, x, y);
    auto meta = base_meta("add2");
    meta["width"] = std::to_string(width);
    return s.finish(outs, std::move(meta), "ac0");
}

Circuit sub2(int width) {
    if (width < 1) throw config_error("sub2: width must be positive");
    BuildSink s(static_cast<GateId>(2 * width));
    std::vector<GateId> all = input_ids(static_cast<GateId>(2 * width));
    std::span<const GateId> x(all.data(), static_cast<std::size_t>(width));
    std::span<const GateId> y(all.data() + width, static_cast<std::size_t>(width));
    SubResult r = emit_sub2(s, x, y);
    std::vector<GateId> outs = r.diff;
    outs.push_back(r.borrow);
    auto meta = base_meta("sub2");
    meta["width"] = std::to_string(width);
    return s.finish(outs, std::move(meta), "ac0");
}

Circuit cmp_fixed(int width) {
    if (width < 1) throw config_error("cmp_fixed: width must be positive");
    BuildSink s(static_cast<GateId>(2 * width));
    std::vector<GateId> all = input_ids(static_cast<GateId>(2 * width));
    std::span<const GateId> x(all.data(), static_cast<std::size_t>(width));
    std::span<const GateId> y(all.data() + width, static_cast<std::size_t>(width));
    Cmp3 r = emit_cmp_fixed(s, x, y);
    auto meta = base_meta("cmp_fixed");
    meta["width"] = std::to_string(width);
    return s.finish({r.lt, r.eq, r.gt}, std::move(meta), "ac0");
}

Circuit itadd(std::int64_t rows, int width) {
    if (rows < 1 || width < 1) throw config_error("itadd: bad dimensions");
    BuildSink s(static_cast<GateId>(rows * width));
    std::vector<std::vector<GateId>> r(static_cast<std::size_t>(rows));
    for (std::int64_t i = 0; i < rows; ++i)
        for (int w = 0; w < width; ++w)
            r[static_cast<std::size_t>(i)].push_back(static_cast<GateId>(i * width + w));
    std::vector<GateId> outs = emit_itadd(s, r);
    auto meta = base_meta("itadd");
    meta["rows"] = std::to_string(rows);
    meta["width"] = std::to_string(width);
    return s.finish(outs, std::move(meta));
}

Circuit float_expand(int p) {
    validate_precision(p);
    BuildSink s(static_cast<GateId>(p));
    FloatFix f = emit_float_expand(s, input_ids(static_cast<GateId>(p)), p);
    std::vector<GateId> outs{f.sign};
    outs.insert(outs.end(), f.mag.begin(), f.mag.end());
    auto meta = base_meta("float_expand");
    meta["p"] = std::to_string(p);
    meta["e0"] = std::to_string(-q_of(p));
    meta["width"] = std::to_string(expand_width(p));
    return s.finish(outs, std::move(meta));
}

Circuit fixed_to_float(int p, int width, std::int64_t e0) {
    validate_precision(p);
    if (width < 1) throw config_error("fixed_to_float: width must be positive");
    BuildSink s(static_cast<GateId>(1 + width));
    std::vector<GateId> all = input_ids(static_cast<GateId>(1 + width));
    std::vector<GateId> outs = emit_fixed_to_float(
        s, all[0], std::span<const GateId>(all.data() + 1, static_cast<std::size_t>(width)),
        p, e0);
    auto meta = base_meta("fixed_to_float");
    meta["p"] = std::to_string(p);
    meta["e0"] = std::to_string(e0);
    meta["width"] = std::to_string(width);
    return s.finish(outs, std::move(meta));
}

Circuit float_sum_circuit(std::int64_t n, std::int64_t k, int p, std::int64_t ncap) {
    if (n < 1 || k < 1) throw config_error("float_sum_circuit: bad dimensions");
    if (ncap < 0) ncap = n;
    BuildSink s(static_cast<GateId>(n * k * p));
    std::vector<std::vector<GateId>> vecs(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t b = 0; b < k * p; ++b)
            vecs[static_cast<std::size_t>(j)].push_back(static_cast<GateId>(j * k * p + b));
    std::vector<GateId> outs = emit_float_sum(s, vecs, k, p, ncap);
    auto meta = base_meta("float_sum");
    meta["n"] = std::to_string(n);
    meta["k"] = std::to_string(k);
    meta["p"] = std::to_string(p);
    meta["ncap"] = std::to_string(ncap);
    return s.finish(outs, std::move(meta));
}

Circuit float_div_circuit(int p, std::int64_t nmax) {
    validate_precision(p);
    int wd = count_width(nmax);
    BuildSink s(static_cast<GateId>(p + wd));
    std::vector<GateId> all = input_ids(static_cast<GateId>(p + wd));
    std::vector<GateId> outs = emit_float_div(
        s, std::span<const GateId>(all.data(), static_cast<std::size_t>(p)),
        std::span<const GateId>(all.data() + p, static_cast<std::size_t>(wd)), p, nmax);
    auto meta = base_meta("float_div");
    meta["p"] = std::to_string(p);
    meta["nmax"] = std::to_string(nmax);
    return s.finish(outs, std::move(meta), "ac0");
}

Circuit float_eq_circuit(int p) {
    validate_precision(p);
    BuildSink s(static_cast<GateId>(2 * p));
    std::vector<GateId> all = input_ids(static_cast<GateId>(2 * p));
    GateId out = emit_float_eq(
        s, std::span<const GateId>(all.data(), static_cast<std::size_t>(p)),
        std::span<const GateId>(all.data() + p, static_cast<std::size_t>(p)));
    auto meta = base_meta("float_eq");
    meta["p"] = std::to_string(p);
    return s.finish({out}, std::move(meta), "ac0");
}

Circuit sel_circuit(std::int64_t k, int p) {
    if (k < 1) throw config_error("sel_circuit: k must be positive");
    BuildSink s(static_cast<GateId>(k * p + 1));
    std::vector<GateId> all = input_ids(static_cast<GateId>(k * p + 1));
    std::vector<GateId> outs = emit_sel(
        s, std::span<const GateId>(all.data(), static_cast<std::size_t>(k * p)),
        all[static_cast<std::size_t>(k * p)]);
    auto meta = base_meta("sel");
    meta["k"] = std::to_string(k);
    meta["p"] = std::to_string(p);
    return s.finish(outs, std::move(meta), "ac0");
}

Circuit float_max_circuit(std::int64_t n, int p) {
    if (n < 1) throw config_error("float_max_circuit: n must be positive");
    BuildSink s(static_cast<GateId>(n * p));
    std::vector<std::vector<GateId>> encs(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j)
        for (int b = 0; b < p; ++b)
            encs[static_cast<std::size_t>(j)].push_back(static_cast<GateId>(j * p + b));
    MaxOut m = emit_float_max(s, encs, p);
    std::vector<GateId> outs = m.max_bits;
    outs.insert(outs.end(), m.indicators.begin(), m.indicators.end());
    auto meta = base_meta("float_max");
    meta["n"] = std::to_string(n);
    meta["p"] = std::to_string(p);
    return s.finish(outs, std::move(meta));
}

Circuit score_circuit(const ScoreSpec& spec, std::int64_t k, int p) {
    BuildSink s(static_cast<GateId>(2 * k * p));
    std::vector<GateId> all = input_ids(static_cast<GateId>(2 * k * p));
    std::vector<GateId> outs = emit_score(
        s, spec, std::span<const GateId>(all.data(), static_cast<std::size_t>(k * p)),
        std::span<const GateId>(all.data() + k * p, static_cast<std::size_t>(k * p)), k, p);
    auto meta = base_meta("score");
    meta["k"] = std::to_string(k);
    meta["p"] = std::to_string(p);
    meta["score"] = spec.describe();
    return s.finish(outs, std::move(meta));
}

} // namespace synth
} // namespace ahac
