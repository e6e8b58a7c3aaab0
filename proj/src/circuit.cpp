#include "ahac/circuit.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>

namespace ahac {

const char* op_name(Op op) {
    switch (op) {
        case Op::IN: return "IN";
        case Op::C0: return "C0";
        case Op::C1: return "C1";
        case Op::NOT: return "NOT";
        case Op::AND: return "AND";
        case Op::OR: return "OR";
        case Op::MAJ: return "MAJ";
    }
    return "?";
}

namespace {

void check_arity(Op op, std::size_t arity, GateId id) {
    bool ok = true;
    switch (op) {
        case Op::IN:
        case Op::C0:
        case Op::C1: ok = arity == 0; break;
        case Op::NOT: ok = arity == 1; break;
        case Op::AND:
        case Op::OR:
        case Op::MAJ: ok = arity >= 1; break;
    }
    if (!ok)
        throw config_error("gate g" + std::to_string(id) + ": bad arity for " +
                           op_name(op));
}

} // namespace

void validate(const Circuit& c) {
    if (c.in_off.size() != c.ops.size() + 1)
        throw config_error("circuit: offset table size mismatch");
    if (c.basis != "tc0" && c.basis != "ac0")
        throw config_error("circuit: unknown basis " + c.basis);
    if (c.n_inputs > c.size()) throw config_error("circuit: n_inputs exceeds gate count");
    for (GateId id = 0; id < c.size(); ++id) {
        Op op = c.ops[id];
        if ((id < c.n_inputs) != (op == Op::IN))
            throw config_error("circuit: IN gates must be exactly ids 0.." +
                               std::to_string(c.n_inputs ? c.n_inputs - 1 : 0));
        auto ins = c.gate_inputs(id);
        check_arity(op, ins.size(), id);
        if (op == Op::MAJ && c.basis == "ac0")
            throw config_error("circuit: MAJ gate g" + std::to_string(id) +
                               " not allowed under basis=ac0");
        for (GateId in : ins)
            if (in >= id)
                throw config_error("circuit: forward reference g" + std::to_string(in) +
                                   " in gate g" + std::to_string(id));
    }
    if (c.outputs.empty()) throw config_error("circuit: no outputs");
    for (GateId out : c.outputs)
        if (out >= c.size())
            throw config_error("circuit: output g" + std::to_string(out) +
                               " does not exist");
}

Circuit build(const std::vector<Gate>& gates, const std::vector<GateId>& outputs,
              std::map<std::string, std::string> meta, std::string basis) {
    Circuit c;
    c.basis = std::move(basis);
    c.meta = std::move(meta);
    c.outputs = outputs;
    c.ops.reserve(gates.size());
    c.in_off.reserve(gates.size() + 1);
    c.in_off.push_back(0);
    GateId inputs_seen = 0;
    bool inputs_done = false;
    for (std::size_t id = 0; id < gates.size(); ++id) {
        const Gate& g = gates[id];
        if (g.op == Op::IN) {
            if (inputs_done)
                throw config_error("circuit: IN gate g" + std::to_string(id) +
                                   " after non-input gates (id gap)");
            ++inputs_seen;
        } else {
            inputs_done = true;
        }
        c.ops.push_back(g.op);
        for (GateId in : g.inputs) c.in_ids.push_back(in);
        c.in_off.push_back(c.in_ids.size());
    }
    c.n_inputs = inputs_seen;
    validate(c);
    return c;
}

BitVec eval(const Circuit& c, const BitVec& inputs) {
    if (inputs.size() != c.n_inputs)
        throw config_error("eval: expected " + std::to_string(c.n_inputs) +
                           " input bits, got " + std::to_string(inputs.size()));
    BitVec v(c.size(), 0);
    for (GateId id = 0; id < c.size(); ++id) {
        auto ins = c.gate_inputs(id);
        switch (c.ops[id]) {
            case Op::IN: v[id] = inputs[id] ? 1 : 0; break;
            case Op::C0: v[id] = 0; break;
            case Op::C1: v[id] = 1; break;
            case Op::NOT: v[id] = v[ins[0]] ? 0 : 1; break;
            case Op::AND: {
                Bit r = 1;
                for (GateId in : ins) r &= v[in];
                v[id] = r;
                break;
            }
            case Op::OR: {
                Bit r = 0;
                for (GateId in : ins) r |= v[in];
                v[id] = r;
                break;
            }
            case Op::MAJ: {
                std::size_t ones = 0;
                for (GateId in : ins) ones += v[in];
                v[id] = 2 * ones > ins.size() ? 1 : 0;
                break;
            }
        }
    }
    BitVec out(c.outputs.size());
    for (std::size_t i = 0; i < c.outputs.size(); ++i) out[i] = v[c.outputs[i]];
    return out;
}

std::vector<std::uint64_t> eval_packed(const Circuit& c,
                                       const std::vector<std::uint64_t>& inputs) {
    if (inputs.size() != c.n_inputs)
        throw config_error("eval_packed: input width mismatch");
    std::vector<std::uint64_t> v(c.size(), 0);
    // Vertical counter for strict majority over up to 2^32 inputs per gate.
    std::uint64_t cnt[33];
    for (GateId id = 0; id < c.size(); ++id) {
        auto ins = c.gate_inputs(id);
        switch (c.ops[id]) {
            case Op::IN: v[id] = inputs[id]; break;
            case Op::C0: v[id] = 0; break;
            case Op::C1: v[id] = ~std::uint64_t{0}; break;
            case Op::NOT: v[id] = ~v[ins[0]]; break;
            case Op::AND: {
                std::uint64_t r = ~std::uint64_t{0};
                for (GateId in : ins) r &= v[in];
                v[id] = r;
                break;
            }
            case Op::OR: {
                std::uint64_t r = 0;
                for (GateId in : ins) r |= v[in];
                v[id] = r;
                break;
            }
            case Op::MAJ: {
                int width = std::bit_width(ins.size());
                for (int t = 0; t <= width; ++t) cnt[t] = 0;
                for (GateId in : ins) {
                    std::uint64_t carry = v[in];
                    for (int t = 0; carry && t <= width; ++t) {
                        std::uint64_t s = cnt[t] ^ carry;
                        carry = cnt[t] & carry;
                        cnt[t] = s;
                    }
                }
                // count > m/2  <=>  2*count > m  <=>  count >= floor(m/2)+1
                std::uint64_t k = ins.size() / 2 + 1;
                std::uint64_t ge = ~std::uint64_t{0}; // count(t..) == k(t..) so far
                std::uint64_t res = 0;
                for (int t = width; t >= 0; --t) {
                    std::uint64_t kb = (k >> t) & 1 ? ~std::uint64_t{0} : 0;
                    res |= ge & cnt[t] & ~kb; // count bit 1 where k bit 0 => greater
                    ge &= ~(cnt[t] ^ kb);
                }
                v[id] = res | ge; // greater or equal to k
                break;
            }
        }
    }
    std::vector<std::uint64_t> out(c.outputs.size());
    for (std::size_t i = 0; i < c.outputs.size(); ++i) out[i] = v[c.outputs[i]];
    return out;
}

std::size_t depth_forward(const Circuit& c) {
    std::vector<std::uint32_t> d(c.size(), 0);
    std::size_t best = 0;
    for (GateId id = 0; id < c.size(); ++id) {
        std::uint32_t m = 0;
        for (GateId in : c.gate_inputs(id)) m = std::max(m, d[in] + 1);
        d[id] = m;
        best = std::max<std::size_t>(best, m);
    }
    return best;
}

std::size_t depth_reverse(const Circuit& c) {
    // Longest path ending at each gate, computed by pushing from consumers
    // backwards over ids in descending order.
    std::vector<std::uint32_t> up(c.size(), 0); // longest path from gate downstream
    std::size_t best = 0;
    for (GateId id = c.size(); id-- > 0;) {
        for (GateId in : c.gate_inputs(id))
            up[in] = std::max(up[in], up[id] + 1);
        best = std::max<std::size_t>(best, up[id]);
    }
    return best;
}

std::pair<std::size_t, std::size_t> size_depth(const Circuit& c) {
    return {c.size(), depth_forward(c)};
}

namespace netfmt {

void header(std::ostream& os, const std::string& basis, GateId n_inputs) {
    os << "tc0-netlist v1 basis=" << basis << " inputs=" << n_inputs << "\n";
}

void gate_line(std::ostream& os, GateId id, Op op, std::span<const GateId> ins) {
    os << 'g' << id << " = " << op_name(op) << '(';
    for (std::size_t i = 0; i < ins.size(); ++i) {
        if (i) os << ',';
        os << 'g' << ins[i];
    }
    os << ")\n";
}

void outputs_line(std::ostream& os, std::span<const GateId> outs) {
    os << "outputs:";
    for (GateId o : outs) os << " g" << o;
    os << "\n";
}

void meta_block(std::ostream& os, const std::map<std::string, std::string>& meta) {
    os << "meta:\n";
    for (const auto& [k, v] : meta) os << k << '=' << v << "\n";
}

} // namespace netfmt

void serialize(const Circuit& c, std::ostream& os) {
    validate(c);
    netfmt::header(os, c.basis, c.n_inputs);
    for (GateId id = c.n_inputs; id < c.size(); ++id)
        netfmt::gate_line(os, id, c.ops[id], c.gate_inputs(id));
    netfmt::outputs_line(os, c.outputs);
    netfmt::meta_block(os, c.meta);
}

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    serialize(c, os);
    return os.str();
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line_no = 0;

    bool next_line(std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw config_error("netlist parse error at line " + std::to_string(line_no) +
                           ": " + msg);
    }
};

std::uint64_t parse_uint(Parser& p, std::string_view s, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        p.fail(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

GateId parse_gate_ref(Parser& p, std::string_view s) {
    if (s.empty() || s[0] != 'g') p.fail("expected gate reference, got '" + std::string(s) + "'");
    return static_cast<GateId>(parse_uint(p, s.substr(1), "gate id"));
}

std::optional<Op> op_from_name(std::string_view s) {
    for (Op op : {Op::IN, Op::C0, Op::C1, Op::NOT, Op::AND, Op::OR, Op::MAJ})
        if (s == op_name(op)) return op;
    return std::nullopt;
}

} // namespace

Circuit deserialize(std::string_view text) {
    Parser p{text};
    std::string_view line;
    if (!p.next_line(line)) p.fail("empty document");

    Circuit c;
    {
        std::istringstream hdr{std::string(line)};
        std::string magic, ver, basis_kv, inputs_kv;
        hdr >> magic >> ver >> basis_kv >> inputs_kv;
        if (magic != "tc0-netlist" || ver != "v1")
            p.fail("bad header, expected 'tc0-netlist v1 ...'");
        if (basis_kv.rfind("basis=", 0) != 0 || inputs_kv.rfind("inputs=", 0) != 0)
            p.fail("bad header fields");
        c.basis = basis_kv.substr(6);
        c.n_inputs = static_cast<GateId>(parse_uint(p, inputs_kv.substr(7), "input count"));
    }
    c.ops.assign(c.n_inputs, Op::IN);
    c.in_off.assign(c.n_inputs + 1, 0);

    bool saw_outputs = false;
    while (p.next_line(line)) {
        if (line == "meta:") {
            if (!saw_outputs) p.fail("meta block before outputs line");
            while (p.next_line(line)) {
                auto eq_at = line.find('=');
                if (eq_at == std::string_view::npos) p.fail("malformed meta line");
                c.meta[std::string(line.substr(0, eq_at))] = std::string(line.substr(eq_at + 1));
            }
            break;
        }
        if (line.rfind("outputs:", 0) == 0) {
            std::istringstream os{std::string(line.substr(8))};
            std::string tok;
            while (os >> tok) c.outputs.push_back(parse_gate_ref(p, tok));
            saw_outputs = true;
            continue;
        }
        if (saw_outputs) p.fail("gate line after outputs");
        // g<id> = <OP>(<args>)
        auto sp = line.find(" = ");
        if (sp == std::string_view::npos) p.fail("expected 'g<id> = OP(...)'");
        GateId id = parse_gate_ref(p, line.substr(0, sp));
        if (id != c.ops.size())
            p.fail("id gap or out-of-order gate g" + std::to_string(id) +
                   ", expected g" + std::to_string(c.ops.size()));
        std::string_view rest = line.substr(sp + 3);
        auto open = rest.find('(');
        if (open == std::string_view::npos || rest.back() != ')')
            p.fail("malformed gate expression");
        auto op = op_from_name(rest.substr(0, open));
        if (!op) p.fail("unknown op '" + std::string(rest.substr(0, open)) + "'");
        if (*op == Op::IN) p.fail("explicit IN gate lines are not allowed");
        std::string_view args = rest.substr(open + 1, rest.size() - open - 2);
        c.ops.push_back(*op);
        if (!args.empty()) {
            std::size_t start = 0;
            while (true) {
                auto comma = args.find(',', start);
                std::string_view tok =
                    comma == std::string_view::npos ? args.substr(start)
                                                    : args.substr(start, comma - start);
                c.in_ids.push_back(parse_gate_ref(p, tok));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
        }
        c.in_off.push_back(c.in_ids.size());
    }
    if (!saw_outputs) p.fail("missing outputs line");
    try {
        validate(c);
    } catch (const config_error& e) {
        throw config_error(std::string("netlist validation: ") + e.what());
    }
    return c;
}

} // namespace ahac
