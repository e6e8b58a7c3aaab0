#pragma once

#include "ahac/attention.hpp"
#include "ahac/circuit.hpp"
#include "ahac/synth.hpp"

#include <iosfwd>
#include <optional>

// Full attention-head assembly (scores -> max -> select -> sum/count ->
// divide), layer and transformer composition, and the streaming netlist
// emitter with its bounded-counter audit.

namespace ahac {

struct HeadParams {
    Params base; // n, k, p (+ optional schedule)
    ScoreSpec spec;
    // Capacity all count/divisor widths are derived from. Widths depend on
    // ncap, never on n, so circuit size at fixed (k, p, ncap) is an exact
    // polynomial in n. -1 resolves to max(n, 32).
    std::int64_t ncap = -1;
    // Emit explicit score-equality gadgets against the broadcast maximum
    // instead of reusing the argmax indicators from the max gadget.
    bool literal_levels = false;

    std::int64_t resolved_ncap() const;
    void validate() const;
};

struct StageInfo {
    std::string name;
    std::uint64_t gates = 0; // gates emitted by this stage (first position)
    std::size_t depth = 0;   // circuit depth reached at stage end
};

struct HeadPlan {
    HeadParams params;
    std::vector<StageInfo> stages; // profile of one position's pipeline
    std::uint64_t total_gates = 0; // full circuit size incl. inputs
    std::size_t depth = 0;
};

using AuditStats = Audit;

// Emits the head pipeline for every position over arbitrary input bits
// (n*k*p ids, position-major then component-major); returns n*k*p outputs.
std::vector<GateId> emit_head(GateSink& sink, const HeadParams& hp,
                              std::span<const GateId> X,
                              std::vector<StageInfo>* first_position_stages = nullptr);

HeadPlan plan_head(const HeadParams& hp);

Circuit compile_head(const HeadParams& hp);

Circuit compile_layer(const Params& base, const LayerSpec& layer,
                      std::int64_t ncap = -1, bool literal_levels = false);

// Inputs are n * ceil(log2 |alphabet|) symbol-code bits; single accept output.
Circuit compile_transformer(const Params& base, const ModelSpec& model,
                            std::int64_t ncap = -1);

// Streams the exact bytes of serialize(compile_head(hp)) without building the
// circuit; per-gate state is never retained and loop counters are audited.
AuditStats emit_streaming(const HeadParams& hp, std::ostream& os);

} // namespace ahac
