#pragma once

#include "ahac/floatp.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Threshold-circuit IR: gate DAG over {IN, C0, C1, NOT, AND, OR, MAJ} with
// multi-output support, plus evaluation, metrics and the versioned netlist
// text format (the only wire format between modules and the CLI).

namespace ahac {

enum class Op : std::uint8_t { IN, C0, C1, NOT, AND, OR, MAJ };

const char* op_name(Op op);

using GateId = std::uint32_t;

struct Gate {
    Op op;
    std::vector<GateId> inputs; // must reference strictly smaller ids
};

// Gate storage is flat (CSR) so multi-million-gate netlists stay compact.
struct Circuit {
    std::vector<Op> ops;
    std::vector<std::uint64_t> in_off; // size() + 1 offsets into in_ids
    std::vector<GateId> in_ids;
    GateId n_inputs = 0;
    std::vector<GateId> outputs;
    std::string basis = "tc0"; // "tc0" or "ac0"; ac0 forbids MAJ
    std::map<std::string, std::string> meta;

    std::size_t size() const { return ops.size(); }
    std::span<const GateId> gate_inputs(GateId id) const {
        return {in_ids.data() + in_off[id], in_ids.data() + in_off[id + 1]};
    }
};

// Validates the full gate stream: ids dense from 0, IN gates exactly the
// first n_inputs ids, arities, no forward references, nonempty outputs.
Circuit build(const std::vector<Gate>& gates, const std::vector<GateId>& outputs,
              std::map<std::string, std::string> meta = {}, std::string basis = "tc0");

// Re-checks all Circuit invariants (used after deserialization).
void validate(const Circuit& c);

// Single-pass evaluation. MAJ is strict: 1 iff #ones > #zeros.
BitVec eval(const Circuit& c, const BitVec& inputs);

// 64 independent evaluations at once; lane b of word i is input bit i of
// evaluation b. Must agree bit-for-bit with eval (tested).
std::vector<std::uint64_t> eval_packed(const Circuit& c,
                                       const std::vector<std::uint64_t>& inputs);

// size = node count including IN and constant gates;
// depth = edge count of the longest directed path.
std::pair<std::size_t, std::size_t> size_depth(const Circuit& c);

std::size_t depth_forward(const Circuit& c);
std::size_t depth_reverse(const Circuit& c); // independent route, must agree

// Netlist text format, byte-stable:
//   tc0-netlist v1 basis=<b> inputs=<N>
//   g<id> = <OP>(<args>)        one line per non-input gate, ids ascending
//   outputs: g<id> g<id> ...
//   meta:
//   <key>=<value>               sorted by key
std::string serialize(const Circuit& c);
void serialize(const Circuit& c, std::ostream& os);
Circuit deserialize(std::string_view text);

// Line formatters shared by serialize() and the streaming emitter so both
// paths are byte-identical by construction.
namespace netfmt {
void header(std::ostream& os, const std::string& basis, GateId n_inputs);
void gate_line(std::ostream& os, GateId id, Op op, std::span<const GateId> ins);
void outputs_line(std::ostream& os, std::span<const GateId> outs);
void meta_block(std::ostream& os, const std::map<std::string, std::string>& meta);
} // namespace netfmt

} // namespace ahac
