#include "turingnet/transformer.hpp"

#include <algorithm>

namespace turingnet {

namespace {

void check_map(const FeedForward& f, std::size_t d, const std::string& what) {
    if (f.is_identity()) return;
    if (*f.in_dim() != d || *f.out_dim() != d)
        throw ShapeError(what + " maps " + std::to_string(*f.in_dim()) + " -> " +
                         std::to_string(*f.out_dim()) + ", model dimension is " + std::to_string(d));
}

void check_score(const ScoreFn& s, std::size_t d, const std::string& what) {
    if (s.kind() != ScoreKind::MultPhi && s.dim() != d)
        throw ShapeError(what + " score expects dimension " + std::to_string(s.dim()));
}

}  // namespace

void TransformerParams::validate() const {
    if (enc_layers.empty() || dec_layers.empty())
        throw ShapeError("a transformer needs at least one encoder and one decoder layer");
    for (std::size_t l = 0; l < enc_layers.size(); ++l) {
        const auto& p = enc_layers[l];
        std::string tag = "encoder layer " + std::to_string(l) + " ";
        check_map(p.Q, dim, tag + "Q");
        check_map(p.K, dim, tag + "K");
        check_map(p.V, dim, tag + "V");
        check_map(p.O, dim, tag + "O");
        check_score(p.score, dim, tag);
    }
    check_map(final_K, dim, "final K");
    check_map(final_V, dim, "final V");
    for (std::size_t l = 0; l < dec_layers.size(); ++l) {
        const auto& p = dec_layers[l];
        std::string tag = "decoder layer " + std::to_string(l) + " ";
        check_map(p.Qself, dim, tag + "Q");
        check_map(p.Kself, dim, tag + "K");
        check_map(p.Vself, dim, tag + "V");
        check_map(p.O, dim, tag + "O");
        check_score(p.self_score, dim, tag + "self");
        check_score(p.cross_score, dim, tag + "cross");
    }
    check_map(final_F, dim, "final F");
}

RatVec PosEnc::at(std::size_t dim, std::size_t i) const {
    RatVec v(dim);
    if (i == 0) throw std::invalid_argument("positions start at 1");
    Rat pos(static_cast<long>(i));
    for (const auto& t : terms) {
        if (t.slot >= dim) throw ShapeError("positional term outside the vector");
        Rat x = t.coef;
        switch (t.power) {
            case 0: break;
            case 1: x *= pos; break;
            case -1: x /= pos; break;
            case -2: x /= pos * pos; break;
            default: throw std::invalid_argument("unsupported positional power");
        }
        v[t.slot] += x;
    }
    return v;
}

Clause Clause::equals(std::size_t coord, Rat v) {
    return Clause{ClauseKind::Equals, coord, coord + 1, std::move(v), {}};
}

Clause Clause::greater_than(std::size_t coord, Rat v) {
    return Clause{ClauseKind::GreaterThan, coord, coord + 1, std::move(v), {}};
}

Clause Clause::one_hot_in(std::size_t begin, std::size_t end, std::vector<std::size_t> allowed) {
    return Clause{ClauseKind::OneHotIn, begin, end, Rat(0), std::move(allowed)};
}

bool Predicate::operator()(const RatVec& y) const {
    for (const auto& c : clauses) {
        if (c.end > y.size() || c.begin >= c.end) throw ShapeError("predicate clause outside the vector");
        switch (c.kind) {
            case ClauseKind::Equals:
                if (y[c.begin] != c.value) return false;
                break;
            case ClauseKind::GreaterThan:
                if (!(y[c.begin] > c.value)) return false;
                break;
            case ClauseKind::OneHotIn: {
                std::optional<std::size_t> hot;
                for (std::size_t k = c.begin; k < c.end; ++k) {
                    if (y[k].is_zero()) continue;
                    if (y[k] != Rat(1) || hot) return false;
                    hot = k - c.begin;
                }
                if (!hot || std::find(c.allowed.begin(), c.allowed.end(), *hot) == c.allowed.end())
                    return false;
                break;
            }
        }
    }
    return true;
}

Predicate Predicate::shifted(std::size_t offset) const {
    Predicate p = *this;
    for (auto& c : p.clauses) {
        c.begin += offset;
        c.end += offset;
    }
    return p;
}

std::vector<RatVec> embed_word(const Recognizer& rec, std::string_view w) {
    std::vector<std::string> syms = tokenize(rec.alphabet, w);
    if (syms.empty() && rec.empty_word_symbol) syms.push_back(*rec.empty_word_symbol);
    if (syms.empty()) throw std::invalid_argument("the empty word has no encoder input");
    std::vector<RatVec> X;
    X.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i) {
        auto it = rec.embed.find(syms[i]);
        if (it == rec.embed.end()) throw std::invalid_argument("no embedding for symbol " + syms[i]);
        X.push_back(it->second + rec.posenc.at(rec.params.dim, i + 1));
    }
    return X;
}

std::vector<RatVec> enc_layer(const std::vector<RatVec>& X, const EncLayerParams& p) {
    std::vector<RatVec> keys, values;
    keys.reserve(X.size());
    values.reserve(X.size());
    for (const auto& x : X) {
        keys.push_back(p.K.apply(x));
        values.push_back(p.V.apply(x));
    }
    std::vector<RatVec> Z;
    Z.reserve(X.size());
    for (const auto& x : X) {
        RatVec a = attend_detailed(p.Q.apply(x), keys, values, p.score).value + x;
        Z.push_back(p.O.apply(a) + a);
    }
    return Z;
}

KVPair run_tenc(const std::vector<RatVec>& X, const TransformerParams& params) {
    if (X.empty()) throw std::invalid_argument("encoder input is empty");
    std::vector<RatVec> cur = X;
    for (const auto& layer : params.enc_layers) cur = enc_layer(cur, layer);
    KVPair kv;
    for (const auto& x : cur) {
        kv.keys.push_back(params.final_K.apply(x));
        kv.values.push_back(params.final_V.apply(x));
    }
    return kv;
}

std::vector<RatVec> dec_layer(const std::vector<RatVec>& Y, const KVPair& kv,
                              const DecLayerParams& p) {
    if (Y.empty()) throw std::invalid_argument("decoder input is empty");
    std::vector<RatVec> keys, values, Z;
    for (std::size_t i = 0; i < Y.size(); ++i) {
        keys.push_back(p.Kself.apply(Y[i]));
        values.push_back(p.Vself.apply(Y[i]));
    }
    for (std::size_t i = 0; i < Y.size(); ++i) {
        std::span<const RatVec> ks(keys.data(), i + 1), vs(values.data(), i + 1);
        RatVec pi = attend_detailed(p.Qself.apply(Y[i]), ks, vs, p.self_score).value + Y[i];
        RatVec a = attend(pi, kv, p.cross_score) + pi;
        Z.push_back(p.O.apply(a) + a);
    }
    return Z;
}

Decoder::Decoder(const TransformerParams& params, KVPair kv)
    : params_(&params),
      kv_(std::move(kv)),
      keys_(params.dec_layers.size()),
      values_(params.dec_layers.size()) {
    if (kv_.keys.empty()) throw std::invalid_argument("decoder needs a non-empty encoder output");
}

DecoderStep Decoder::push(const RatVec& ybar) {
    DecoderStep step;
    RatVec u = ybar;
    for (std::size_t l = 0; l < params_->dec_layers.size(); ++l) {
        const DecLayerParams& p = params_->dec_layers[l];
        keys_[l].push_back(p.Kself.apply(u));
        values_[l].push_back(p.Vself.apply(u));
        LayerStep ls;
        Attended self = attend_detailed(p.Qself.apply(u), keys_[l], values_[l], p.self_score);
        ls.p = self.value + u;
        ls.self_weights = std::move(self.weights);
        Attended cross = attend_detailed(ls.p, kv_.keys, kv_.values, p.cross_score);
        ls.a = cross.value + ls.p;
        ls.cross_weights = std::move(cross.weights);
        ls.z = p.O.apply(ls.a) + ls.a;
        u = ls.z;
        step.layers.push_back(std::move(ls));
    }
    step.output = params_->final_F.apply(u);
    ++length_;
    return step;
}

std::vector<RatVec> run_trans(const std::vector<RatVec>& X, const RatVec& y0, std::size_t r,
                              const Recognizer& rec) {
    std::vector<RatVec> ys;
    if (r == 0) return ys;
    Decoder dec(rec.params, run_tenc(X, rec.params));
    RatVec y = y0;
    for (std::size_t t = 0; t < r; ++t) {
        y = dec.push(y + rec.posenc.at(rec.params.dim, t + 1)).output;
        ys.push_back(y);
    }
    return ys;
}

Decision recognizer_accepts(std::string_view w, const Recognizer& rec, std::size_t max_steps) {
    if (max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
    Decoder dec(rec.params, run_tenc(embed_word(rec, w), rec.params));
    RatVec y = rec.seed;
    for (std::size_t t = 0; t < max_steps; ++t) {
        y = dec.push(y + rec.posenc.at(rec.params.dim, t + 1)).output;
        if (rec.final_pred(y)) return Decision{true, t + 1};
    }
    return Decision{false, max_steps};
}

std::vector<RatVec> run_recognizer(std::string_view w, const Recognizer& rec, std::size_t r) {
    return run_trans(embed_word(rec, w), rec.seed, r, rec);
}

}  // namespace turingnet
