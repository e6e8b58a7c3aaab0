#include "ahac/attention.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace ahac {

using nlohmann::json;

void TruthTable::validate() const {
    if (in_width < 0 || in_width > 24) throw config_error("truth table: bad input width");
    if (out_width < 1) throw config_error("truth table: bad output width");
    if (rows.size() != (std::size_t{1} << in_width))
        throw config_error("truth table: expected " +
                           std::to_string(std::size_t{1} << in_width) + " rows, got " +
                           std::to_string(rows.size()));
    for (const BitVec& r : rows)
        if (static_cast<int>(r.size()) != out_width)
            throw config_error("truth table: row width mismatch");
}

const BitVec& TruthTable::apply(const BitVec& in) const {
    if (static_cast<int>(in.size()) != in_width)
        throw config_error("truth table: input width mismatch");
    std::size_t idx = 0;
    for (int i = 0; i < in_width; ++i)
        if (in[i]) idx |= std::size_t{1} << i;
    return rows[idx];
}

void ScoreSpec::validate(std::int64_t k, int p) const {
    if (kind == Kind::bilinear) {
        for (const auto* m : {&Q, &K}) {
            if (static_cast<std::int64_t>(m->size()) != k)
                throw config_error("bilinear score: matrix must be k x k");
            for (const auto& row : *m) {
                if (static_cast<std::int64_t>(row.size()) != k)
                    throw config_error("bilinear score: matrix must be k x k");
                for (std::int64_t e : row)
                    if (value(truncate(Rat(e), p)) != Rat(e))
                        throw config_error("bilinear score: entry " + std::to_string(e) +
                                           " not representable in F_p");
            }
        }
    } else if (kind == Kind::table) {
        table.validate();
        if (table.in_width != 2 * k * p || table.out_width != p)
            throw config_error("table score: width must be 2*k*p in, p out");
    }
}

std::string ScoreSpec::describe() const {
    switch (kind) {
        case Kind::dot: return "dot";
        case Kind::bilinear: return "bilinear";
        case Kind::table: return "table";
    }
    return "?";
}

FloatP score(const ScoreSpec& spec, const FVec& x, const FVec& xp, int p) {
    if (x.size() != xp.size()) throw config_error("score: dimension mismatch");
    std::int64_t k = static_cast<std::int64_t>(x.size());
    switch (spec.kind) {
        case ScoreSpec::Kind::dot: {
            Rat acc = 0;
            for (std::size_t c = 0; c < x.size(); ++c) acc += value(x[c]) * value(xp[c]);
            return truncate(acc, p);
        }
        case ScoreSpec::Kind::bilinear: {
            spec.validate(k, p);
            Rat acc = 0;
            for (std::int64_t r = 0; r < k; ++r) {
                Rat yr = 0, zr = 0;
                for (std::int64_t c = 0; c < k; ++c) {
                    yr += Rat(spec.Q[r][c]) * value(x[c]);
                    zr += Rat(spec.K[r][c]) * value(xp[c]);
                }
                acc += yr * zr;
            }
            return truncate(acc, p);
        }
        case ScoreSpec::Kind::table: {
            spec.validate(k, p);
            BitVec in;
            for (const FloatP& f : x) {
                BitVec e = encode(f, p);
                in.insert(in.end(), e.begin(), e.end());
            }
            for (const FloatP& f : xp) {
                BitVec e = encode(f, p);
                in.insert(in.end(), e.begin(), e.end());
            }
            return decode(spec.table.apply(in), p);
        }
    }
    throw config_error("score: unknown kind");
}

std::vector<Rat> xi(const std::vector<FloatP>& s) {
    MaxResult m = max_seq(s); // rejects empty input
    std::vector<Rat> w(s.size(), Rat(0));
    Rat share(1, static_cast<std::int64_t>(m.argmax.size()));
    for (std::int64_t i : m.argmax) w[static_cast<std::size_t>(i - 1)] = share;
    return w;
}

std::vector<FVec> head_ref(const std::vector<FVec>& X, const ScoreSpec& spec, int p,
                           HeadMode mode) {
    if (X.empty()) throw config_error("head_ref: empty input sequence");
    std::int64_t k = static_cast<std::int64_t>(X[0].size());
    for (const FVec& v : X)
        if (static_cast<std::int64_t>(v.size()) != k)
            throw config_error("head_ref: ragged input");
    std::vector<FVec> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        std::vector<FloatP> s(X.size());
        for (std::size_t j = 0; j < X.size(); ++j) s[j] = score(spec, X[i], X[j], p);
        MaxResult m = max_seq(s);
        std::int64_t msize = static_cast<std::int64_t>(m.argmax.size());
        if (mode == HeadMode::two_trunc) {
            std::vector<FVec> attended;
            for (std::int64_t j : m.argmax) attended.push_back(X[static_cast<std::size_t>(j - 1)]);
            out[i] = div_trunc(sum_trunc(attended, k, p), msize, p);
        } else {
            FVec o(static_cast<std::size_t>(k));
            for (std::int64_t c = 0; c < k; ++c) {
                Rat acc = 0;
                for (std::int64_t j : m.argmax)
                    acc += value(X[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(c)]);
                o[static_cast<std::size_t>(c)] = truncate(acc / Rat(msize), p);
            }
            out[i] = o;
        }
    }
    return out;
}

void FfnSpec::validate(std::int64_t h, std::int64_t k, int p) const {
    if (kind == Kind::table) {
        table.validate();
        if (table.in_width != h * k * p || table.out_width != k * p)
            throw config_error("ffn table: width must be (h*k)*p in, k*p out");
    } else {
        if (lhs < 0 || lhs >= h * k || rhs < 0 || rhs >= h * k)
            throw config_error("ffn comparator: component index out of range");
        if (static_cast<std::int64_t>(out_gt.size()) != k ||
            static_cast<std::int64_t>(out_le.size()) != k)
            throw config_error("ffn comparator: branch vectors must have width k");
    }
}

void LayerSpec::validate(std::int64_t k, int p) const {
    if (heads.empty()) throw config_error("layer: needs at least one head");
    for (const ScoreSpec& h : heads) h.validate(k, p);
    ffn.validate(static_cast<std::int64_t>(heads.size()), k, p);
}

std::vector<FVec> layer_ref(const std::vector<FVec>& X, const LayerSpec& layer,
                            std::int64_t k, int p) {
    layer.validate(k, p);
    std::vector<std::vector<FVec>> head_out;
    for (const ScoreSpec& h : layer.heads) head_out.push_back(head_ref(X, h, p));
    std::vector<FVec> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        FVec concat;
        for (const auto& ho : head_out)
            concat.insert(concat.end(), ho[i].begin(), ho[i].end());
        if (layer.ffn.kind == FfnSpec::Kind::table) {
            BitVec in;
            for (const FloatP& f : concat) {
                BitVec e = encode(f, p);
                in.insert(in.end(), e.begin(), e.end());
            }
            BitVec o = layer.ffn.table.apply(in);
            FVec v(static_cast<std::size_t>(k));
            for (std::int64_t c = 0; c < k; ++c)
                v[static_cast<std::size_t>(c)] =
                    decode(BitVec(o.begin() + c * p, o.begin() + (c + 1) * p), p);
            out[i] = v;
        } else {
            const FloatP& a = concat[static_cast<std::size_t>(layer.ffn.lhs)];
            const FloatP& b = concat[static_cast<std::size_t>(layer.ffn.rhs)];
            out[i] = cmp(a, b) > 0 ? layer.ffn.out_gt : layer.ffn.out_le;
        }
    }
    return out;
}

void ModelSpec::validate(std::int64_t n, int p) const {
    std::int64_t q = q_of(p);
    if (alphabet.empty()) throw config_error("model: empty alphabet");
    for (const std::string& s : alphabet)
        if (s.size() != 1) throw config_error("model: symbols must be single characters");
    if (k < 1) throw config_error("model: k must be positive");
    if (embedding == Embedding::binary || embedding == Embedding::onehot) {
        if (k < 2) throw config_error("model: positional embeddings need k >= 2");
        if (embedding == Embedding::onehot && n > q)
            throw config_error("model: one-hot embedding needs q >= n (2^j unrepresentable)");
    } else {
        if (symtable.size() != alphabet.size())
            throw config_error("model: symbol table size must match alphabet");
        for (const FVec& v : symtable) {
            if (static_cast<std::int64_t>(v.size()) != k)
                throw config_error("model: symbol table rows must have width k");
            for (const FloatP& f : v) encode(f, p); // range check against this p
        }
    }
    for (const LayerSpec& l : layers) l.validate(k, p);
    std::int64_t out_width = k;
    if (readout_component < 0 || readout_component >= out_width)
        throw config_error("model: readout component out of range");
}

std::vector<int> ModelSpec::symbol_indices(const std::string& word) const {
    std::vector<int> idx;
    for (char ch : word) {
        int found = -1;
        for (std::size_t s = 0; s < alphabet.size(); ++s)
            if (alphabet[s][0] == ch) found = static_cast<int>(s);
        if (found < 0)
            throw config_error(std::string("word contains symbol outside alphabet: '") +
                               ch + "'");
        idx.push_back(found);
    }
    return idx;
}

FVec embed_symbol(const ModelSpec& model, int sym_index0, std::int64_t pos1, int p) {
    FVec v(static_cast<std::size_t>(model.k), FloatP{+1, 0, 0});
    switch (model.embedding) {
        case ModelSpec::Embedding::binary:
            v[0] = truncate(Rat(sym_index0 + 1), p);
            v[1] = truncate(Rat(pos1), p);
            break;
        case ModelSpec::Embedding::onehot: {
            std::int64_t q = q_of(p);
            if (pos1 > q)
                throw config_error("one-hot embedding: 2^j with j > q is unrepresentable");
            v[0] = truncate(Rat(sym_index0 + 1), p);
            v[1] = canonicalize(+1, 1, pos1, p); // 2^j
            break;
        }
        case ModelSpec::Embedding::symtable:
            v = model.symtable[static_cast<std::size_t>(sym_index0)];
            break;
    }
    return v;
}

std::vector<FVec> encode_input(const std::string& word, const ModelSpec& model,
                               std::int64_t n, int p) {
    if (static_cast<std::int64_t>(word.size()) != n)
        throw config_error("encode_input: |word| must equal n");
    model.validate(n, p);
    std::vector<int> syms = model.symbol_indices(word);
    std::vector<FVec> X;
    for (std::int64_t j = 1; j <= n; ++j)
        X.push_back(embed_symbol(model, syms[static_cast<std::size_t>(j - 1)], j, p));
    return X;
}

Bit transformer_ref(const std::string& word, const ModelSpec& model, int p) {
    std::int64_t n = static_cast<std::int64_t>(word.size());
    std::vector<FVec> X = encode_input(word, model, n, p);
    for (const LayerSpec& l : model.layers) X = layer_ref(X, l, model.k, p);
    const FloatP& r = X[0][static_cast<std::size_t>(model.readout_component)];
    return (r.sign > 0 && r.mant > 0) ? 1 : 0;
}

namespace {

TruthTable table_from_json(const json& j) {
    TruthTable t;
    t.in_width = j.at("in_width").get<int>();
    t.out_width = j.at("out_width").get<int>();
    for (const auto& row : j.at("rows")) {
        std::string s = row.get<std::string>();
        BitVec bits;
        for (char ch : s) {
            if (ch != '0' && ch != '1') throw config_error("truth table rows must be 0/1 strings");
            bits.push_back(ch == '1');
        }
        t.rows.push_back(std::move(bits));
    }
    t.validate();
    return t;
}

ScoreSpec score_from_json(const json& j) {
    ScoreSpec s;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dot") {
        s.kind = ScoreSpec::Kind::dot;
    } else if (kind == "bilinear") {
        s.kind = ScoreSpec::Kind::bilinear;
        s.Q = j.at("Q").get<std::vector<std::vector<std::int64_t>>>();
        s.K = j.at("K").get<std::vector<std::vector<std::int64_t>>>();
    } else if (kind == "table") {
        s.kind = ScoreSpec::Kind::table;
        s.table = table_from_json(j.at("table"));
    } else {
        throw config_error("unknown score kind: " + kind);
    }
    return s;
}

FVec fvec_from_json(const json& j, int p) {
    FVec v;
    for (const auto& e : j) v.push_back(truncate(parse_rational(e.get<std::string>()), p));
    return v;
}

} // namespace

ScoreSpec parse_score_spec(const std::string& json_text) {
    try {
        return score_from_json(json::parse(json_text));
    } catch (const json::exception& e) {
        throw config_error(std::string("score spec: ") + e.what());
    }
}

TruthTable parse_truth_table(const std::string& json_text) {
    try {
        return table_from_json(json::parse(json_text));
    } catch (const json::exception& e) {
        throw config_error(std::string("truth table: ") + e.what());
    }
}

ModelSpec parse_model_spec(const std::string& json_text) {
    try {
        json j = json::parse(json_text);
        ModelSpec m;
        m.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        m.k = j.at("k").get<std::int64_t>();
        int p = j.at("p").get<int>(); // used to materialize rational constants
        std::string emb = j.at("embedding").at("kind").get<std::string>();
        if (emb == "binary") {
            m.embedding = ModelSpec::Embedding::binary;
        } else if (emb == "onehot") {
            m.embedding = ModelSpec::Embedding::onehot;
        } else if (emb == "symtable") {
            m.embedding = ModelSpec::Embedding::symtable;
            for (const std::string& sym : m.alphabet)
                m.symtable.push_back(fvec_from_json(j.at("embedding").at("table").at(sym), p));
        } else {
            throw config_error("unknown embedding kind: " + emb);
        }
        for (const auto& lj : j.at("layers")) {
            LayerSpec l;
            for (const auto& hj : lj.at("heads")) l.heads.push_back(score_from_json(hj));
            const auto& fj = lj.at("ffn");
            std::string fk = fj.at("kind").get<std::string>();
            if (fk == "table") {
                l.ffn.kind = FfnSpec::Kind::table;
                l.ffn.table = table_from_json(fj.at("table"));
            } else if (fk == "comparator") {
                l.ffn.kind = FfnSpec::Kind::comparator;
                l.ffn.lhs = fj.at("lhs").get<std::int64_t>();
                l.ffn.rhs = fj.at("rhs").get<std::int64_t>();
                l.ffn.out_gt = fvec_from_json(fj.at("out_gt"), p);
                l.ffn.out_le = fvec_from_json(fj.at("out_le"), p);
            } else {
                throw config_error("unknown ffn kind: " + fk);
            }
            m.layers.push_back(std::move(l));
        }
        m.readout_component = j.at("readout").at("component").get<std::int64_t>();
        return m;
    } catch (const json::exception& e) {
        throw config_error(std::string("model spec: ") + e.what());
    }
}

ModelSpec majority_demo_model() {
    ModelSpec m;
    m.alphabet = {"a", "b"};
    m.k = 2;
    m.embedding = ModelSpec::Embedding::symtable;
    m.symtable = {
        {FloatP{+1, 1, 0}, FloatP{+1, 0, 0}}, // enc(a) = (1, 0)
        {FloatP{+1, 0, 0}, FloatP{+1, 1, 0}}, // enc(b) = (0, 1)
    };
    LayerSpec l;
    ScoreSpec tie;
    tie.kind = ScoreSpec::Kind::bilinear;
    tie.Q = {{0, 0}, {0, 0}};
    tie.K = {{0, 0}, {0, 0}};
    l.heads.push_back(tie);
    l.ffn.kind = FfnSpec::Kind::comparator;
    l.ffn.lhs = 0; // truncated count_a / n
    l.ffn.rhs = 1; // truncated count_b / n
    l.ffn.out_gt = {FloatP{+1, 1, 0}, FloatP{+1, 0, 0}};
    l.ffn.out_le = {FloatP{+1, 0, 0}, FloatP{+1, 0, 0}};
    m.layers.push_back(std::move(l));
    m.readout_component = 0;
    return m;
}

} // namespace ahac
