#include "turingnet/tm_compiler.hpp"

#include <sstream>

namespace turingnet {

TMLayout::TMLayout(std::size_t states, std::size_t symbols) : nq(states), ns(symbols) {
    q1 = 0;
    s1 = q1 + nq;
    x1 = s1 + ns;
    q2 = x1 + 1;
    s2 = q2 + nq;
    x2 = s2 + ns;
    x3 = x2 + 1;
    x4 = x3 + 1;
    x5 = x4 + 1;
    s3 = x5 + 1;
    x6 = s3 + ns;
    s4 = x6 + 1;
    x7 = s4 + ns;
    x8 = x7 + 1;
    x9 = x8 + 1;
    x10 = x9 + 1;
    x11 = x10 + 1;
    dim = x11 + 1;
}

TMLayout::TMLayout(const TuringMachine& tm) : TMLayout(tm.states.size(), tm.alphabet.size()) {}

namespace {

struct Block {
    const char* name;
    std::size_t begin, len;
    bool states;  // one-hot over Q (else over Σ, or a scalar when len == 1)
};

std::vector<Block> blocks(const TMLayout& L) {
    return {{"q1", L.q1, L.nq, true},  {"s1", L.s1, L.ns, false}, {"x1", L.x1, 1, false},
            {"q2", L.q2, L.nq, true},  {"s2", L.s2, L.ns, false}, {"x2", L.x2, 1, false},
            {"x3", L.x3, 1, false},    {"x4", L.x4, 1, false},    {"x5", L.x5, 1, false},
            {"s3", L.s3, L.ns, false}, {"x6", L.x6, 1, false},    {"s4", L.s4, L.ns, false},
            {"x7", L.x7, 1, false},    {"x8", L.x8, 1, false},    {"x9", L.x9, 1, false},
            {"x10", L.x10, 1, false},  {"x11", L.x11, 1, false}};
}

bool is_scalar(const Block& b) { return b.name[0] == 'x'; }

}  // namespace

std::string TMLayout::slot_name(const TuringMachine& tm, std::size_t k) const {
    for (const auto& b : blocks(*this)) {
        if (k < b.begin || k >= b.begin + b.len) continue;
        if (is_scalar(b)) return b.name;
        const auto& names = b.states ? tm.states : tm.alphabet;
        return std::string(b.name) + "[" + names[k - b.begin] + "]";
    }
    throw ShapeError("slot " + std::to_string(k) + " is outside the layout");
}

std::string TMLayout::block_name(std::size_t k) const {
    for (const auto& b : blocks(*this))
        if (k >= b.begin && k < b.begin + b.len)
            return is_scalar(b) ? std::string(b.name) : std::string(b.name) + " block";
    throw ShapeError("slot " + std::to_string(k) + " is outside the layout");
}

std::string TMLayout::table(const TuringMachine& tm) const {
    static const char* meaning[] = {
        "state q(i)",        "symbol s(i)",        "move m(i-1)",       "state q(i+1)",
        "written v(i)",      "move m(i)",          "move m(i-1)",       "c(i+1)/(i+1)",
        "c(i)/(i+1)",        "input symbol alpha(i+1)", "input index beta(i+1)",
        "last write v(l(i+1))", "last visit l(i+1)", "1",                 "i+1",
        "1/(i+1)",           "1/(i+1)^2"};
    std::ostringstream os;
    os << "dimension " << dim << " = 2*" << nq << " + 4*" << ns << " + 11\n";
    auto bs = blocks(*this);
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto& b = bs[i];
        os << b.name << "\t" << b.begin;
        if (b.len > 1) os << ".." << b.begin + b.len - 1;
        os << "\t" << meaning[i];
        if (!is_scalar(b)) {
            os << "\t";
            const auto& names = b.states ? tm.states : tm.alphabet;
            for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
        }
        os << "\n";
    }
    return os.str();
}

TMEmbedding build_tm_embedding(const TuringMachine& tm) {
    TMLayout L(tm);
    TMEmbedding e;
    for (std::size_t s = 0; s < tm.alphabet.size(); ++s)
        e.embed[tm.alphabet[s]] = RatVec::unit(L.dim, L.s3 + s);
    e.posenc.terms = {{L.x8, Rat(1), 0}, {L.x9, Rat(1), 1}, {L.x10, Rat(1), -1}, {L.x11, Rat(1), -2}};
    return e;
}

TMEncoder build_tm_encoder(const TuringMachine& tm) {
    TMLayout L(tm);
    const std::size_t d = L.dim;
    TMEncoder enc;
    // V ≡ 0 and O ≡ 0 make the layer the identity through its residuals.
    enc.layer = EncLayerParams{FeedForward::zero(d, d), FeedForward::zero(d, d),
                               FeedForward::zero(d, d), FeedForward::zero(d, d), ScoreFn::mult_phi()};
    RatMat k(d, d);
    k(L.x9, L.x8) = 1;   // i
    k(L.x8, L.x9) = -1;  // -1
    enc.final_K = FeedForward::linear(std::move(k));
    RatMat v(d, d);
    for (std::size_t s = 0; s < L.ns; ++s) v(L.s3 + s, L.s3 + s) = 1;
    v(L.x9, L.x6) = 1;
    enc.final_V = FeedForward::linear(std::move(v));
    return enc;
}

AffineMap build_pair_encoder(const TuringMachine& tm) {
    const std::size_t nq = tm.states.size(), ns = tm.alphabet.size();
    OneHotCodec code{nq, ns};
    RatMat m(nq + ns, nq * ns);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t s = 0; s < ns; ++s) {
            m(q, code.pair(q, s)) = 1;
            m(nq + s, code.pair(q, s)) = 1;
        }
    RatVec b(nq * ns);
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = -1;
    return AffineMap(std::move(m), std::move(b));
}

RatMat build_transition_matrix(const TuringMachine& tm) {
    const std::size_t nq = tm.states.size(), ns = tm.alphabet.size();
    OneHotCodec code{nq, ns};
    RatMat m(nq * ns, 2 * nq * ns);
    for (std::size_t q = 0; q < nq; ++q) {
        if (tm.is_accepting(q)) continue;
        for (std::size_t s = 0; s < ns; ++s) {
            const auto& t = tm.rule(q, s);
            if (!t) throw NormalizationError("transition function is not total: missing (" +
                                             tm.states[q] + ", " + tm.alphabet[s] + ")");
            m(code.pair(q, s), code.triple(t->next, t->write, t->move)) = 1;
        }
    }
    return m;
}

RatMat build_decoder_matrix(const TuringMachine& tm) {
    const std::size_t nq = tm.states.size(), ns = tm.alphabet.size();
    OneHotCodec code{nq, ns};
    RatMat a(2 * nq * ns, nq + ns + 1);
    for (int m : {-1, 1})
        for (std::size_t q = 0; q < nq; ++q)
            for (std::size_t s = 0; s < ns; ++s) {
                std::size_t r = code.triple(q, s, m);
                a(r, q) = 1;
                a(r, nq + s) = 1;
                a(r, nq + ns) = m;
            }
    return a;
}

FeedForward build_transition_ffn(const TuringMachine& tm) {
    return build_transition_ffn(tm, build_transition_matrix(tm));
}

FeedForward build_transition_ffn(const TuringMachine& tm, const RatMat& transition) {
    TMLayout L(tm);
    const std::size_t nq = L.nq, ns = L.ns, d = L.dim;
    // Hidden layer: [⟦q⟧, ⟦s⟧, m̂ = m/2 + 1/2, g1(⟦q⟧, ⟦s⟧)].
    const std::size_t mhat = nq + ns, g = nq + ns + 1, hidden = g + nq * ns;
    RatMat h1(d, hidden);
    RatVec b1(hidden);
    for (std::size_t q = 0; q < nq; ++q) h1(L.q1 + q, q) = 1;
    for (std::size_t s = 0; s < ns; ++s) h1(L.s1 + s, nq + s) = 1;
    h1(L.x1, mhat) = Rat(1, 2);
    b1[mhat] = Rat(1, 2);
    AffineMap pair = build_pair_encoder(tm);
    for (std::size_t i = 0; i < nq + ns; ++i)
        for (std::size_t j = 0; j < nq * ns; ++j) h1(L.q1 + i, g + j) = pair.matrix()(i, j);
    for (std::size_t j = 0; j < nq * ns; ++j) b1[g + j] = pair.bias()[j];

    // Output: cancel group 1, write ⟦q'⟧, ⟦v⟧, m into group 2 and keep m^(i-1) in x3.
    RatMat h2(hidden, d);
    RatVec b2(d);
    for (std::size_t q = 0; q < nq; ++q) h2(q, L.q1 + q) = -1;
    for (std::size_t s = 0; s < ns; ++s) h2(nq + s, L.s1 + s) = -1;
    h2(mhat, L.x1) = -2;
    b2[L.x1] = 1;
    h2(mhat, L.x3) = 2;
    b2[L.x3] = -1;
    RatMat lookup = transition * build_decoder_matrix(tm);
    for (std::size_t r = 0; r < nq * ns; ++r) {
        for (std::size_t q = 0; q < nq; ++q) h2(g + r, L.q2 + q) = lookup(r, q);
        for (std::size_t s = 0; s < ns; ++s) h2(g + r, L.s2 + s) = lookup(r, nq + s);
        h2(g + r, L.x2) = lookup(r, nq + ns);
    }
    return FeedForward({Stage{AffineMap(std::move(h1), std::move(b1)), Activation::Sigma},
                        Stage{AffineMap(std::move(h2), std::move(b2)), Activation::Identity}});
}

namespace {

/// O for layers 2 and 3: the forced cross attention adds ⟦α^(i+1)⟧, β^(i+1)
/// a second time, so halve those slots and leave the rest untouched.
FeedForward cancel_cross_attention(const TMLayout& L) {
    RatMat o(L.dim, L.dim);
    for (std::size_t s = 0; s < L.ns; ++s) o(L.s3 + s, L.s3 + s) = Rat(-1, 2);
    o(L.x6, L.x6) = Rat(-1, 2);
    return FeedForward::linear(std::move(o));
}

}  // namespace

DecLayerParams build_transition_layer(const TuringMachine& tm) {
    TMLayout L(tm);
    const std::size_t d = L.dim;
    return DecLayerParams{FeedForward::zero(d, d), FeedForward::zero(d, d), FeedForward::zero(d, d),
                          build_transition_ffn(tm), ScoreFn::mult_phi(), ScoreFn::mult_phi()};
}

DecLayerParams build_head_position_layer(const TuringMachine& tm) {
    TMLayout L(tm);
    const std::size_t d = L.dim;
    RatMat v(d, d);
    v(L.x2, L.x4) = 1;
    v(L.x3, L.x5) = 1;
    return DecLayerParams{FeedForward::zero(d, d), FeedForward::zero(d, d),
                          FeedForward::linear(std::move(v)), cancel_cross_attention(L),
                          ScoreFn::mult_phi(), ScoreFn::mult_phi()};
}

DecLayerParams build_last_write_layer(const TuringMachine& tm) {
    TMLayout L(tm);
    const std::size_t d = L.dim;
    RatMat q(d, d), k(d, d), v(d, d);
    q(L.x4, L.x9) = 1;           // c^(i+1)/(i+1)
    q(L.x10, L.x10) = 1;         // 1/(i+1)
    q(L.x11, L.x11) = Rat(1, 3); // 1/(3(i+1)^2)
    k(L.x10, L.x9) = 1;          // 1/(j+1)
    k(L.x5, L.x10) = -1;         // -c^(j)/(j+1)
    k(L.x11, L.x11) = 1;         // 1/(j+1)^2
    for (std::size_t s = 0; s < L.ns; ++s) v(L.s2 + s, L.s4 + s) = 1;
    v(L.x9, L.x7) = 1;           // j = (j+1) - 1
    v(L.x8, L.x7) = -1;
    return DecLayerParams{FeedForward::linear(std::move(q)), FeedForward::linear(std::move(k)),
                          FeedForward::linear(std::move(v)), cancel_cross_attention(L),
                          ScoreFn::mult_phi(), ScoreFn::mult_phi()};
}

FeedForward build_if_gadget(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw std::invalid_argument("if gadget needs m, n >= 1");
    const std::size_t in = m + 2 * n + 1, b = m + 2 * n;
    RatMat f1(in, m + 2 * n);
    RatVec c1(m + 2 * n);
    for (std::size_t i = 0; i < m; ++i) f1(i, i) = 1;
    for (std::size_t k = 0; k < n; ++k) {
        f1(m + k, m + k) = 1;  // y - b
        f1(b, m + k) = -1;
        f1(m + n + k, m + n + k) = 1;  // z + b - 1
        f1(b, m + n + k) = 1;
        c1[m + n + k] = -1;
    }
    RatMat f2(m + 2 * n, m + n);
    for (std::size_t i = 0; i < m; ++i) f2(i, i) = 1;
    for (std::size_t k = 0; k < n; ++k) {
        f2(m + k, m + k) = 1;
        f2(m + n + k, m + k) = 1;
    }
    return FeedForward({Stage{AffineMap(std::move(f1), std::move(c1)), Activation::Sigma},
                        Stage{AffineMap(std::move(f2)), Activation::Identity}});
}

FeedForward build_output_F(const TuringMachine& tm) {
    TMLayout L(tm);
    const std::size_t nq = L.nq, ns = L.ns, d = L.dim;
    // f1: [⟦q⟧, ⟦m⟧, ⟦α⟧, b1, ⟦v^ℓ⟧, ⟦#⟧, b2], all passed through σ.
    const std::size_t mh = nq, al = nq + 2, b1 = al + ns, vl = b1 + 1, hs = vl + ns, b2 = hs + ns;
    const std::size_t w1 = b2 + 1;
    RatMat f1(d, w1);
    for (std::size_t q = 0; q < nq; ++q) f1(L.q2 + q, q) = 1;
    f1(L.x2, mh) = Rat(1, 2);  // m/2 + 1/2
    f1(L.x8, mh) = Rat(1, 2);
    f1(L.x2, mh + 1) = Rat(-1, 2);  // -m/2 + 1/2
    f1(L.x8, mh + 1) = Rat(1, 2);
    for (std::size_t s = 0; s < ns; ++s) {
        f1(L.s3 + s, al + s) = 1;
        f1(L.s4 + s, vl + s) = 1;
    }
    f1(L.x9, b1) = 1;  // (r+1) - β^(r+1)
    f1(L.x6, b1) = -1;
    f1(L.x8, hs + tm.blank) = 1;
    f1(L.x7, b2) = 1;  // ℓ(r+1) - (r+1) + 2
    f1(L.x9, b2) = -1;
    f1(L.x8, b2) = 2;
    FeedForward F = FeedForward::linear(std::move(f1), Activation::Sigma);

    // b2 picks ⟦#⟧ (first visit) over ⟦v^ℓ⟧.
    F = F.then(build_if_gadget(b1 + 1, ns));
    // Move b1 behind the selected symbol.
    const std::size_t w2 = b1 + 1 + ns;
    RatMat perm(w2, w2);
    for (std::size_t i = 0; i < b1; ++i) perm(i, i) = 1;
    for (std::size_t s = 0; s < ns; ++s) perm(b1 + 1 + s, b1 + s) = 1;
    perm(b1, w2 - 1) = 1;
    F = F.then(FeedForward::linear(std::move(perm)));
    // b1 picks that symbol (beyond the input) over ⟦α⟧.
    F = F.then(build_if_gadget(nq + 2, ns));
    // f4: [⟦q⟧, ⟦m⟧, ⟦s⟧] -> [⟦q⟧, ⟦s⟧, m, 0, …].
    RatMat f4(nq + 2 + ns, d);
    for (std::size_t q = 0; q < nq; ++q) f4(q, L.q1 + q) = 1;
    f4(mh, L.x1) = 1;
    f4(mh + 1, L.x1) = -1;
    for (std::size_t s = 0; s < ns; ++s) f4(nq + 2 + s, L.s1 + s) = 1;
    return F.then(FeedForward::linear(std::move(f4)));
}

Recognizer compile_tm(const TuringMachine& tm) {
    check_normalized(tm);
    TMLayout L(tm);
    Recognizer rec;
    rec.alphabet = tm.alphabet;
    TMEmbedding emb = build_tm_embedding(tm);
    rec.embed = std::move(emb.embed);
    rec.posenc = std::move(emb.posenc);
    TMEncoder enc = build_tm_encoder(tm);
    rec.params.dim = L.dim;
    rec.params.enc_layers = {enc.layer};
    rec.params.final_K = enc.final_K;
    rec.params.final_V = enc.final_V;
    rec.params.dec_layers = {build_transition_layer(tm), build_head_position_layer(tm),
                             build_last_write_layer(tm)};
    rec.params.final_F = build_output_F(tm);
    rec.params.validate();
    rec.seed = RatVec(L.dim);
    rec.seed[L.q1 + tm.init] = 1;
    rec.seed[L.s1 + tm.blank] = 1;
    rec.final_pred.clauses = {Clause::one_hot_in(L.q1, L.q1 + L.nq, tm.accept)};
    rec.empty_word_symbol = tm.alphabet[tm.blank];
    for (std::size_t k = 0; k < L.dim; ++k) rec.slot_names.push_back(L.slot_name(tm, k));
    return rec;
}

RatVec expected_tm_output(const TuringMachine& tm, const TMTrace& trace, std::size_t t) {
    TMLayout L(tm);
    RatVec y(L.dim);
    const TMStep& st = trace.steps.at(t);
    y[L.q1 + st.q] = 1;
    y[L.s1 + st.s] = 1;
    y[L.x1] = trace.m_before(t);
    return y;
}

}  // namespace turingnet
