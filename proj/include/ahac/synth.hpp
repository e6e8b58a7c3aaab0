#pragma once

#include "ahac/attention.hpp"
#include "ahac/circuit.hpp"
#include "ahac/floatp.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

// Gate-level generators: depth-3 LUT compilation, threshold/counting
// gadgets, constant-depth adders and comparators, iterated addition, and the
// float operations (sum, div, eq, sel, max, score) as circuits.
//
// Generators write gates through a GateSink so the same generation code can
// materialize a Circuit, count gates for planning, or stream netlist text
// without retaining per-gate state.

namespace ahac {

// Streaming-emission instrumentation (the logspace-style audit proxy).
struct Audit {
    std::uint64_t live_counters = 0;
    std::uint64_t peak_live_counters = 0;
    std::uint64_t peak_counter_bits = 0;
    std::uint64_t gates_emitted = 0;
    std::uint64_t bytes_emitted = 0;

    void note(std::uint64_t v);
    void enter();
    void leave();
};

// RAII loop counter registered with an Audit (no-op when audit is null).
class AuditCounter {
public:
    AuditCounter(Audit* a, std::uint64_t v = 0) : audit_(a), v_(v) {
        if (audit_) {
            audit_->enter();
            audit_->note(v_);
        }
    }
    ~AuditCounter() {
        if (audit_) audit_->leave();
    }
    AuditCounter(const AuditCounter&) = delete;
    AuditCounter& operator=(const AuditCounter&) = delete;
    AuditCounter& operator=(std::uint64_t v) {
        v_ = v;
        if (audit_) audit_->note(v_);
        return *this;
    }
    operator std::uint64_t() const { return v_; }

private:
    Audit* audit_;
    std::uint64_t v_;
};

class GateSink {
public:
    explicit GateSink(GateId n_inputs) : next_(n_inputs) {}
    virtual ~GateSink() = default;

    GateId emit(Op op, std::span<const GateId> ins);
    GateId emit(Op op, std::initializer_list<GateId> ins) {
        return emit(op, std::span<const GateId>(ins.begin(), ins.size()));
    }
    GateId next_id() const { return next_; }
    virtual Audit* audit() { return nullptr; }
    // Depth of the deepest gate emitted so far (0 where not tracked).
    virtual std::size_t current_depth() const { return 0; }

protected:
    virtual void on_emit(GateId id, Op op, std::span<const GateId> ins) = 0;
    GateId next_;
};

// Materializes a Circuit.
class BuildSink : public GateSink {
public:
    explicit BuildSink(GateId n_inputs);
    Circuit finish(std::vector<GateId> outputs, std::map<std::string, std::string> meta = {},
                   std::string basis = "tc0");

protected:
    void on_emit(GateId id, Op op, std::span<const GateId> ins) override;

private:
    Circuit c_;
};

// Counts gates and tracks per-gate depth; used for planning (stage size and
// depth tables) without keeping the gate structure.
class PlanSink : public GateSink {
public:
    explicit PlanSink(GateId n_inputs);
    std::uint64_t gates() const { return next_; }
    std::size_t max_depth() const { return max_depth_; }
    std::size_t current_depth() const override { return max_depth_; }

protected:
    void on_emit(GateId id, Op op, std::span<const GateId> ins) override;

private:
    std::vector<std::uint32_t> depth_;
    std::size_t max_depth_ = 0;
};

// Streams gate lines directly to an ostream; retains no per-gate state.
class TextSink : public GateSink {
public:
    TextSink(GateId n_inputs, std::ostream& os, Audit* audit);
    Audit* audit() override { return audit_; }

protected:
    void on_emit(GateId id, Op op, std::span<const GateId> ins) override;

private:
    std::ostream& os_;
    Audit* audit_;
};

namespace synth {

inline constexpr int kDefaultLutCap = 16;

// Truth-table materialization of an arbitrary bit function.
TruthTable tabulate(int in_width, int out_width,
                    const std::function<BitVec(const BitVec&)>& fn,
                    int cap = kDefaultLutCap);

// Exact fixed-point layout of expanded floats: W magnitude bits, bit 0 worth
// 2^(-q); the standard layout has W = 2q + p/2 - 1.
int expand_width(int p);

struct FloatFix {
    GateId sign;
    std::vector<GateId> mag; // LSB-first
};

// --- emitters (compose inside a shared sink) ---

std::vector<GateId> emit_lut(GateSink& s, const TruthTable& t,
                             std::span<const GateId> ins);
GateId emit_threshold_at_least(GateSink& s, std::span<const GateId> ins, std::int64_t kk);
std::vector<GateId> emit_exact_count(GateSink& s, std::span<const GateId> ins);
// Exact count with C0 padding and a fixed output width (cap_width bits must
// cover ins.size()); keeps gate counts polynomial across n at fixed caps.
std::vector<GateId> emit_count_capped(GateSink& s, std::span<const GateId> ins,
                                      int cap_width);
std::vector<GateId> emit_add2(GateSink& s, std::span<const GateId> x,
                              std::span<const GateId> y);
struct SubResult {
    std::vector<GateId> diff;
    GateId borrow;
};
SubResult emit_sub2(GateSink& s, std::span<const GateId> x, std::span<const GateId> y);
struct Cmp3 {
    GateId lt, eq, gt;
};
Cmp3 emit_cmp_fixed(GateSink& s, std::span<const GateId> x, std::span<const GateId> y);
// x > K for a constant K >= 0 (C0 when impossible).
GateId emit_gt_const(GateSink& s, std::span<const GateId> x, const Int& K);

std::vector<GateId> emit_itadd(GateSink& s, const std::vector<std::vector<GateId>>& rows,
                               std::int64_t rcap = -1);

FloatFix emit_float_expand(GateSink& s, std::span<const GateId> enc, int p);
std::vector<GateId> emit_fixed_to_float(GateSink& s, GateId sign,
                                        std::span<const GateId> mag, int p,
                                        std::int64_t e0);
GateId emit_float_eq(GateSink& s, std::span<const GateId> a, std::span<const GateId> b);
std::vector<GateId> emit_sel(GateSink& s, std::span<const GateId> bits, GateId y);

struct MaxOut {
    std::vector<GateId> max_bits;   // p bits
    std::vector<GateId> indicators; // n bits, is_max_j
};
MaxOut emit_float_max(GateSink& s, const std::vector<std::vector<GateId>>& encs, int p);

std::vector<GateId> emit_score(GateSink& s, const ScoreSpec& spec,
                               std::span<const GateId> xa, std::span<const GateId> xb,
                               std::int64_t k, int p, int lut_cap = kDefaultLutCap);

std::vector<GateId> emit_float_sum(GateSink& s,
                                   const std::vector<std::vector<GateId>>& vec_encs,
                                   std::int64_t k, int p, std::int64_t ncap);

// Truth table of [[x/d]]_p over (p + ceil(log2(nmax+1))) input bits; rows for
// non-canonical x or d outside [1, nmax] are all-zero (caller contract).
TruthTable div_truth_table(int p, std::int64_t nmax, int cap = kDefaultLutCap);

std::vector<GateId> emit_float_div(GateSink& s, std::span<const GateId> x,
                                   std::span<const GateId> d, int p, std::int64_t nmax,
                                   int lut_cap = kDefaultLutCap);

// --- standalone circuit generators ---

Circuit lut_compile(const TruthTable& t);
Circuit threshold_at_least(std::int64_t n, std::int64_t kk);
Circuit exact_count_bits(std::int64_t n);
Circuit add2(int width);
Circuit sub2(int width);
Circuit cmp_fixed(int width);
Circuit itadd(std::int64_t rows, int width);
Circuit float_expand(int p);
Circuit fixed_to_float(int p, int width, std::int64_t e0);
Circuit float_sum_circuit(std::int64_t n, std::int64_t k, int p, std::int64_t ncap = -1);
Circuit float_div_circuit(int p, std::int64_t nmax);
Circuit float_eq_circuit(int p);
Circuit sel_circuit(std::int64_t k, int p);
Circuit float_max_circuit(std::int64_t n, int p);
Circuit score_circuit(const ScoreSpec& spec, std::int64_t k, int p);

} // namespace synth
} // namespace ahac
