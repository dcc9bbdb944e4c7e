#include "turingnet/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace turingnet {

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

bool all_scalar(const Json& j) {
    for (const auto& e : j)
        if (!is_scalar(e)) return false;
    return true;
}

/// Objects and arrays holding only scalars go on one line; everything else
/// is indented by two spaces per level.
void pretty(std::ostream& os, const Json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    if (is_scalar(j)) {
        os << j.dump();
    } else if (j.empty()) {
        os << (j.is_array() ? "[]" : "{}");
    } else if (all_scalar(j)) {
        os << (j.is_array() ? "[" : "{");
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << (first ? "" : ", ");
            if (j.is_object()) os << Json(it.key()).dump() << ": ";
            os << it.value().dump();
            first = false;
        }
        os << (j.is_array() ? "]" : "}");
    } else {
        os << (j.is_array() ? "[\n" : "{\n");
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << (first ? "" : ",\n") << pad;
            if (j.is_object()) os << Json(it.key()).dump() << ": ";
            pretty(os, it.value(), depth + 1);
            first = false;
        }
        os << "\n" << close << (j.is_array() ? "]" : "}");
    }
}

std::string pretty(const Json& j) {
    std::ostringstream os;
    pretty(os, j, 0);
    os << "\n";
    return os.str();
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

void require_fields(const Json& j, const std::string& what, const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
    if (!j.is_object()) throw ParseError(what + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!required.count(it.key()) && !optional.count(it.key()))
            throw ParseError(what + ": unknown field \"" + it.key() + "\"");
    for (const auto& f : required)
        if (!j.contains(f)) throw ParseError(what + ": missing field \"" + f + "\"");
}

std::string get_string(const Json& j, const std::string& what) {
    if (!j.is_string()) throw ParseError(what + " must be a string");
    return j.get<std::string>();
}

std::size_t get_index(const Json& j, const std::string& what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ParseError(what + " must be a non-negative integer");
    return j.get<std::size_t>();
}

std::vector<std::string> get_names(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be an array of strings");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& e : j) {
        std::string s = get_string(e, what + " entry");
        if (s.empty()) throw ParseError(what + " contains an empty name");
        if (!seen.insert(s).second) throw ParseError(what + " lists \"" + s + "\" twice");
        out.push_back(s);
    }
    return out;
}

std::size_t lookup(const std::vector<std::string>& names, const std::string& name, const std::string& what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw ParseError(what + " \"" + name + "\" is not declared");
}

TuringMachine parse_tm(const std::string& text, bool general) {
    Json j = parse_json(text);
    std::set<std::string> required{"states", "alphabet", "blank", "init", "accept", "delta"};
    std::set<std::string> optional;
    if (general) optional.insert("read_state");
    else required.insert("read_state");
    require_fields(j, "machine", required, optional);

    TuringMachine tm;
    tm.states = get_names(j["states"], "states");
    tm.alphabet = get_names(j["alphabet"], "alphabet");
    std::string blank = get_string(j["blank"], "blank");
    tm.blank = lookup(tm.alphabet, blank, "blank symbol");
    tm.init = lookup(tm.states, get_string(j["init"], "init"), "init state");
    if (j.contains("read_state"))
        tm.read_state = lookup(tm.states, get_string(j["read_state"], "read_state"), "read state");
    for (const auto& a : get_names(j["accept"], "accept")) tm.accept.push_back(lookup(tm.states, a, "accepting state"));
    tm.delta.assign(tm.states.size(), std::vector<std::optional<Transition>>(tm.alphabet.size()));
    if (!j["delta"].is_array()) throw ParseError("delta must be an array");
    std::size_t k = 0;
    for (const auto& r : j["delta"]) {
        std::string where = "rule " + std::to_string(k++);
        require_fields(r, where, {"state", "read", "next", "write", "move"});
        std::size_t q = lookup(tm.states, get_string(r["state"], where + " state"), where + " state");
        std::size_t s = lookup(tm.alphabet, get_string(r["read"], where + " read"), where + " symbol");
        where += " (" + tm.states[q] + ", " + tm.alphabet[s] + ")";
        Transition t;
        t.next = lookup(tm.states, get_string(r["next"], where + " next"), where + " next state");
        t.write = lookup(tm.alphabet, get_string(r["write"], where + " write"), where + " written symbol");
        std::string mv = get_string(r["move"], where + " move");
        if (mv == "L") t.move = -1;
        else if (mv == "R") t.move = 1;
        else if (mv == "S" && general) t.move = 0;
        else throw ParseError(where + ": move \"" + mv + "\" must be \"L\" or \"R\"");
        if (tm.delta[q][s]) throw ParseError(where + ": duplicate transition");
        if (tm.is_accepting(q)) throw ParseError(where + ": accepting states have no transitions");
        tm.delta[q][s] = t;
        tm.rule_order.emplace_back(q, s);
    }
    if (!general) {
        try {
            check_normalized(tm);
        } catch (const NormalizationError& e) {
            throw ParseError(e.what());
        }
    }
    return tm;
}

Json names_json(const std::vector<std::string>& names) {
    Json a = Json::array();
    for (const auto& n : names) a.push_back(n);
    return a;
}

}  // namespace

TuringMachine parse_tm_spec(const std::string& text) { return parse_tm(text, false); }
TuringMachine parse_general_tm_spec(const std::string& text) { return parse_tm(text, true); }

std::string serialize_tm(const TuringMachine& tm) {
    Json j;
    j["states"] = names_json(tm.states);
    j["alphabet"] = names_json(tm.alphabet);
    j["blank"] = tm.alphabet[tm.blank];
    j["init"] = tm.states[tm.init];
    if (tm.read_state) j["read_state"] = tm.states[*tm.read_state];
    Json acc = Json::array();
    for (auto q : tm.accept) acc.push_back(tm.states[q]);
    j["accept"] = acc;
    Json delta = Json::array();
    for (auto [q, s] : tm.rule_order) {
        const auto& t = tm.delta[q][s];
        if (!t) continue;
        Json r;
        r["state"] = tm.states[q];
        r["read"] = tm.alphabet[s];
        r["next"] = tm.states[t->next];
        r["write"] = tm.alphabet[t->write];
        r["move"] = t->move < 0 ? "L" : (t->move > 0 ? "R" : "S");
        delta.push_back(r);
    }
    j["delta"] = delta;
    return pretty(j);
}

Json rat_to_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const Json& j) {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    throw ParseError("rational must be a \"p/q\" string");
}

Json vec_to_json(const RatVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rat_to_json(x));
    return a;
}

RatVec vec_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("vector must be an array");
    std::vector<Rat> e;
    for (const auto& x : j) e.push_back(rat_from_json(x));
    return RatVec(std::move(e));
}

Json mat_to_json(const RatMat& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i)));
    return a;
}

RatMat mat_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    std::size_t cols = j[0].size();
    RatMat m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        RatVec r = vec_from_json(j[i]);
        if (r.size() != cols) throw ParseError("matrix rows have different lengths");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
    }
    return m;
}

Json ffn_to_json(const FeedForward& f) {
    Json stages = Json::array();
    for (const auto& s : f.stages()) {
        Json st;
        st["in"] = s.map.in_dim();
        st["out"] = s.map.out_dim();
        st["act"] = activation_name(s.act);
        st["matrix"] = mat_to_json(s.map.matrix());
        st["bias"] = vec_to_json(s.map.bias());
        stages.push_back(st);
    }
    Json j;
    j["stages"] = stages;
    return j;
}

FeedForward ffn_from_json(const Json& j) {
    require_fields(j, "feed-forward network", {"stages"});
    std::vector<Stage> stages;
    for (const auto& st : j["stages"]) {
        require_fields(st, "stage", {"in", "out", "act", "matrix", "bias"});
        std::size_t in = get_index(st["in"], "stage in"), out = get_index(st["out"], "stage out");
        RatMat m = in == 0 || out == 0 ? RatMat(in, out) : mat_from_json(st["matrix"]);
        if (m.rows() != in || m.cols() != out)
            throw ParseError("stage matrix is not " + std::to_string(in) + "x" + std::to_string(out));
        stages.push_back(Stage{AffineMap(std::move(m), vec_from_json(st["bias"])),
                               parse_activation(get_string(st["act"], "act"))});
    }
    try {
        return FeedForward(std::move(stages));
    } catch (const ShapeError& e) {
        throw ParseError(e.what());
    }
}

Json score_to_json(const ScoreFn& s) {
    Json j;
    switch (s.kind()) {
        case ScoreKind::MultPhi: j["kind"] = "mult_phi"; break;
        case ScoreKind::PosDiff:
            j["kind"] = "pos_diff";
            j["dim"] = s.dim();
            j["slot"] = s.slot();
            break;
        case ScoreKind::NetDefined:
            j["kind"] = "net";
            j["net"] = ffn_to_json(s.net());
            break;
    }
    return j;
}

ScoreFn score_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError("score needs a \"kind\"");
    std::string kind = get_string(j["kind"], "score kind");
    if (kind == "mult_phi") {
        require_fields(j, "score", {"kind"});
        return ScoreFn::mult_phi();
    }
    if (kind == "pos_diff") {
        require_fields(j, "score", {"kind", "dim", "slot"});
        return ScoreFn::pos_diff(get_index(j["dim"], "dim"), get_index(j["slot"], "slot"));
    }
    if (kind == "net") {
        require_fields(j, "score", {"kind", "net"});
        return ScoreFn::net_defined(ffn_from_json(j["net"]));
    }
    throw ParseError("unknown score kind \"" + kind + "\"");
}

Json predicate_to_json(const Predicate& p) {
    Json a = Json::array();
    for (const auto& c : p.clauses) {
        Json j;
        switch (c.kind) {
            case ClauseKind::Equals:
                j["kind"] = "equals";
                j["coord"] = c.begin;
                j["value"] = rat_to_json(c.value);
                break;
            case ClauseKind::GreaterThan:
                j["kind"] = "greater_than";
                j["coord"] = c.begin;
                j["value"] = rat_to_json(c.value);
                break;
            case ClauseKind::OneHotIn: {
                j["kind"] = "one_hot_in";
                j["begin"] = c.begin;
                j["end"] = c.end;
                Json al = Json::array();
                for (auto k : c.allowed) al.push_back(k);
                j["allowed"] = al;
                break;
            }
        }
        a.push_back(j);
    }
    return a;
}

Predicate predicate_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("predicate must be an array of clauses");
    Predicate p;
    for (const auto& c : j) {
        if (!c.is_object() || !c.contains("kind")) throw ParseError("clause needs a \"kind\"");
        std::string kind = get_string(c["kind"], "clause kind");
        if (kind == "equals" || kind == "greater_than") {
            require_fields(c, "clause", {"kind", "coord", "value"});
            std::size_t k = get_index(c["coord"], "coord");
            Rat v = rat_from_json(c["value"]);
            p.clauses.push_back(kind == "equals" ? Clause::equals(k, v) : Clause::greater_than(k, v));
        } else if (kind == "one_hot_in") {
            require_fields(c, "clause", {"kind", "begin", "end", "allowed"});
            std::vector<std::size_t> allowed;
            for (const auto& a : c["allowed"]) allowed.push_back(get_index(a, "allowed"));
            std::size_t b = get_index(c["begin"], "begin"), e = get_index(c["end"], "end");
            if (e <= b) throw ParseError("one_hot_in needs begin < end");
            p.clauses.push_back(Clause::one_hot_in(b, e, std::move(allowed)));
        } else {
            throw ParseError("unknown clause kind \"" + kind + "\"");
        }
    }
    return p;
}

RnnSpec parse_rnn_spec(const std::string& text) {
    Json j = parse_json(text);
    require_fields(j, "rnn", {"d", "W", "V", "U", "embed", "accept"});
    RnnSpec spec;
    spec.rnn.d = get_index(j["d"], "d");
    if (spec.rnn.d == 0) throw ParseError("d must be positive");
    spec.rnn.W = mat_from_json(j["W"]);
    spec.rnn.V = mat_from_json(j["V"]);
    spec.rnn.U = mat_from_json(j["U"]);
    try {
        spec.rnn.validate();
    } catch (const ShapeError& e) {
        throw ParseError(e.what());
    }
    if (!j["embed"].is_object() || j["embed"].empty()) throw ParseError("embed must map symbols to vectors");
    for (auto it = j["embed"].begin(); it != j["embed"].end(); ++it) {
        if (it.key().empty()) throw ParseError("embed has an empty symbol");
        RatVec v = vec_from_json(it.value());
        if (v.size() != spec.rnn.d) throw ParseError("embedding of \"" + it.key() + "\" has the wrong length");
        spec.alphabet.push_back(it.key());
        spec.embed[it.key()] = v;
    }
    spec.accept = predicate_from_json(j["accept"]);
    for (const auto& c : spec.accept.clauses)
        if (c.end > spec.rnn.d) throw ParseError("accept predicate refers past coordinate d");
    return spec;
}

std::string serialize_rnn_spec(const RnnSpec& spec) {
    Json j;
    j["d"] = spec.rnn.d;
    j["W"] = mat_to_json(spec.rnn.W);
    j["V"] = mat_to_json(spec.rnn.V);
    j["U"] = mat_to_json(spec.rnn.U);
    Json e = Json::object();
    for (const auto& a : spec.alphabet) e[a] = vec_to_json(spec.embed.at(a));
    j["embed"] = e;
    j["accept"] = predicate_to_json(spec.accept);
    return pretty(j);
}

Json recognizer_to_json(const Recognizer& rec) {
    Json j;
    j["format"] = "transformer";
    j["dim"] = rec.params.dim;
    j["alphabet"] = names_json(rec.alphabet);
    Json emb = Json::object();
    for (const auto& a : rec.alphabet) emb[a] = vec_to_json(rec.embed.at(a));
    j["embed"] = emb;
    Json pos = Json::array();
    for (const auto& t : rec.posenc.terms) {
        Json p;
        p["slot"] = t.slot;
        p["coef"] = rat_to_json(t.coef);
        p["power"] = t.power;
        pos.push_back(p);
    }
    j["posenc"] = pos;
    if (rec.empty_word_symbol) j["empty_word"] = *rec.empty_word_symbol;
    j["seed"] = vec_to_json(rec.seed);
    j["final_pred"] = predicate_to_json(rec.final_pred);
    Json enc = Json::array();
    for (const auto& l : rec.params.enc_layers) {
        Json e;
        e["Q"] = ffn_to_json(l.Q);
        e["K"] = ffn_to_json(l.K);
        e["V"] = ffn_to_json(l.V);
        e["O"] = ffn_to_json(l.O);
        e["score"] = score_to_json(l.score);
        enc.push_back(e);
    }
    j["encoder"] = {{"layers", enc},
                    {"final_K", ffn_to_json(rec.params.final_K)},
                    {"final_V", ffn_to_json(rec.params.final_V)}};
    Json dec = Json::array();
    for (const auto& l : rec.params.dec_layers) {
        Json e;
        e["Q"] = ffn_to_json(l.Qself);
        e["K"] = ffn_to_json(l.Kself);
        e["V"] = ffn_to_json(l.Vself);
        e["O"] = ffn_to_json(l.O);
        e["self_score"] = score_to_json(l.self_score);
        e["cross_score"] = score_to_json(l.cross_score);
        dec.push_back(e);
    }
    j["decoder"] = {{"layers", dec}, {"final_F", ffn_to_json(rec.params.final_F)}};
    if (!rec.slot_names.empty()) j["slot_names"] = names_json(rec.slot_names);
    return j;
}

Recognizer recognizer_from_json(const Json& j) {
    require_fields(j, "network",
                   {"format", "dim", "alphabet", "embed", "posenc", "seed", "final_pred", "encoder", "decoder"},
                   {"empty_word", "slot_names"});
    if (j["format"] != "transformer") throw ParseError("not a transformer network document");
    Recognizer rec;
    rec.params.dim = get_index(j["dim"], "dim");
    rec.alphabet = get_names(j["alphabet"], "alphabet");
    for (const auto& a : rec.alphabet) {
        if (!j["embed"].contains(a)) throw ParseError("no embedding for symbol \"" + a + "\"");
        rec.embed[a] = vec_from_json(j["embed"][a]);
        if (rec.embed[a].size() != rec.params.dim) throw ParseError("embedding of \"" + a + "\" has the wrong length");
    }
    for (const auto& p : j["posenc"]) {
        require_fields(p, "positional term", {"slot", "coef", "power"});
        int power = p["power"].get<int>();
        if (power < -2 || power > 1) throw ParseError("positional power must be in -2..1");
        std::size_t slot = get_index(p["slot"], "slot");
        if (slot >= rec.params.dim) throw ParseError("positional slot outside the vector");
        rec.posenc.terms.push_back(PosTerm{slot, rat_from_json(p["coef"]), power});
    }
    if (j.contains("empty_word")) rec.empty_word_symbol = get_string(j["empty_word"], "empty_word");
    rec.seed = vec_from_json(j["seed"]);
    if (rec.seed.size() != rec.params.dim) throw ParseError("seed has the wrong length");
    rec.final_pred = predicate_from_json(j["final_pred"]);
    for (const auto& c : rec.final_pred.clauses)
        if (c.end > rec.params.dim) throw ParseError("final_pred refers past the last coordinate");
    const Json& enc = j["encoder"];
    require_fields(enc, "encoder", {"layers", "final_K", "final_V"});
    for (const auto& l : enc["layers"]) {
        require_fields(l, "encoder layer", {"Q", "K", "V", "O", "score"});
        rec.params.enc_layers.push_back(EncLayerParams{ffn_from_json(l["Q"]), ffn_from_json(l["K"]),
                                                       ffn_from_json(l["V"]), ffn_from_json(l["O"]),
                                                       score_from_json(l["score"])});
    }
    rec.params.final_K = ffn_from_json(enc["final_K"]);
    rec.params.final_V = ffn_from_json(enc["final_V"]);
    const Json& dec = j["decoder"];
    require_fields(dec, "decoder", {"layers", "final_F"});
    for (const auto& l : dec["layers"]) {
        require_fields(l, "decoder layer", {"Q", "K", "V", "O", "self_score", "cross_score"});
        rec.params.dec_layers.push_back(DecLayerParams{
            ffn_from_json(l["Q"]), ffn_from_json(l["K"]), ffn_from_json(l["V"]), ffn_from_json(l["O"]),
            score_from_json(l["self_score"]), score_from_json(l["cross_score"])});
    }
    rec.params.final_F = ffn_from_json(dec["final_F"]);
    if (j.contains("slot_names")) {
        rec.slot_names = get_names(j["slot_names"], "slot_names");
        if (rec.slot_names.size() != rec.params.dim) throw ParseError("slot_names has the wrong length");
    }
    try {
        rec.params.validate();
    } catch (const ShapeError& e) {
        throw ParseError(e.what());
    }
    return rec;
}

std::string serialize_recognizer(const Recognizer& rec) { return pretty(recognizer_to_json(rec)); }

Recognizer parse_recognizer(const std::string& text) { return recognizer_from_json(parse_json(text)); }

Json ngpu_to_json(const NGPURecognizer& rec) {
    const NGPUParams& p = rec.params;
    auto kernel = [](const KernelBank& k) {
        Json rows = Json::array();
        for (std::size_t u = 0; u < k.kH(); ++u) {
            Json cols = Json::array();
            for (std::size_t v = 0; v < k.kW(); ++v) cols.push_back(mat_to_json(k.at(u, v)));
            rows.push_back(cols);
        }
        return rows;
    };
    Json j;
    j["format"] = "ngpu";
    j["depth"] = p.depth();
    j["width"] = p.width();
    j["padding"] = padding_name(p.padding);
    j["activations"] = {{"U", activation_name(p.fU)}, {"R", activation_name(p.fR)}, {"F", activation_name(p.fF)}};
    j["kernels"] = {{"U", kernel(p.KU)}, {"R", kernel(p.KR)}, {"F", kernel(p.KF)}};
    j["biases"] = {{"U", mat_to_json(p.BU)}, {"R", mat_to_json(p.BR)}, {"F", mat_to_json(p.BF)}};
    j["alphabet"] = names_json(rec.alphabet);
    Json emb = Json::object();
    for (const auto& a : rec.alphabet) emb[a] = vec_to_json(rec.embed.at(a));
    j["embed"] = emb;
    j["accept"] = predicate_to_json(rec.accept);
    if (p.depth() % 3 == 0 && p.depth() >= 3) {
        // Block boundaries of the rnn construction (depth 3d+3), for readers.
        const std::size_t d = p.depth() / 3 - 1;
        j["blocks"] = {{"E", Json::array({0, d})},
                       {"D", Json::array({d, 2 * d})},
                       {"G", Json::array({2 * d, 3 * d})},
                       {"gadget", Json::array({3 * d, 3 * d + 3})}};
    }
    return j;
}

NGPURecognizer ngpu_from_json(const Json& j) {
    require_fields(j, "Neural GPU network",
                   {"format", "depth", "width", "padding", "activations", "kernels", "biases", "alphabet", "embed",
                    "accept"},
                   {"blocks"});
    if (j["format"] != "ngpu") throw ParseError("not a Neural GPU network document");
    NGPURecognizer rec;
    NGPUParams& p = rec.params;
    const std::size_t d = get_index(j["depth"], "depth"), w = get_index(j["width"], "width");
    p.padding = parse_padding(get_string(j["padding"], "padding"));
    require_fields(j["activations"], "activations", {"U", "R", "F"});
    p.fU = parse_activation(get_string(j["activations"]["U"], "activation"));
    p.fR = parse_activation(get_string(j["activations"]["R"], "activation"));
    p.fF = parse_activation(get_string(j["activations"]["F"], "activation"));
    auto kernel = [&](const Json& k) {
        if (!k.is_array() || k.empty() || !k[0].is_array() || k[0].empty())
            throw ParseError("kernel must be a non-empty kH x kW grid of matrices");
        KernelBank K(k.size(), k[0].size(), d, d);
        for (std::size_t u = 0; u < k.size(); ++u) {
            if (k[u].size() != K.kW()) throw ParseError("kernel rows have different widths");
            for (std::size_t v = 0; v < K.kW(); ++v) {
                RatMat m = mat_from_json(k[u][v]);
                if (m.rows() != d || m.cols() != d) throw ParseError("kernel matrices must be depth x depth");
                K.at(u, v) = std::move(m);
            }
        }
        return K;
    };
    require_fields(j["kernels"], "kernels", {"U", "R", "F"});
    p.KU = kernel(j["kernels"]["U"]);
    p.KR = kernel(j["kernels"]["R"]);
    p.KF = kernel(j["kernels"]["F"]);
    require_fields(j["biases"], "biases", {"U", "R", "F"});
    p.BU = mat_from_json(j["biases"]["U"]);
    p.BR = mat_from_json(j["biases"]["R"]);
    p.BF = mat_from_json(j["biases"]["F"]);
    if (p.BU.rows() != w) throw ParseError("bias matrices must have one row per column of the tensor");
    try {
        p.validate();
    } catch (const ShapeError& e) {
        throw ParseError(e.what());
    }
    rec.alphabet = get_names(j["alphabet"], "alphabet");
    for (const auto& a : rec.alphabet) {
        if (!j["embed"].contains(a)) throw ParseError("no embedding for symbol \"" + a + "\"");
        rec.embed[a] = vec_from_json(j["embed"][a]);
        if (rec.embed[a].size() != d) throw ParseError("embedding of \"" + a + "\" has the wrong length");
    }
    rec.accept = predicate_from_json(j["accept"]);
    return rec;
}

std::string serialize_ngpu(const NGPURecognizer& rec) { return pretty(ngpu_to_json(rec)); }

NGPURecognizer parse_ngpu(const std::string& text) { return ngpu_from_json(parse_json(text)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace turingnet
