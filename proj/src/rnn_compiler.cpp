#include "turingnet/rnn_compiler.hpp"

#include <sstream>

#include "turingnet/ffn.hpp"

namespace turingnet {

RnnLayout::RnnLayout(std::size_t d_) : d(d_) {
    B1 = 0;
    B2 = d;
    B3 = 2 * d;
    a = 3 * d;
    b = a + 1;
    c = a + 2;
    cc = a + 3;
    B4 = a + 4;
    B5 = B4 + d;
    B6 = B5 + d;
    a2 = B6 + d;
    b2 = a2 + 1;
    spare = a2 + 2;
    pos = a2 + 3;
    dim = pos + 1;
}

namespace {

struct Range {
    const char* name;
    std::size_t begin, len;
};

std::vector<Range> ranges(const RnnLayout& L) {
    return {{"alpha", L.B1, L.d},  {"beta", L.B2, L.d},        {"gamma", L.B3, L.d}, {"a", L.a, 1},
            {"b", L.b, 1},         {"c", L.c, 1},              {"c_next", L.cc, 1},  {"beta'", L.B4, L.d},
            {"gamma'", L.B5, L.d}, {"scratch", L.B6, L.d},     {"a'", L.a2, 1},      {"b'", L.b2, 1},
            {"spare", L.spare, 1}, {"pos", L.pos, 1}};
}

Range range_of(const RnnLayout& L, std::size_t k) {
    for (const auto& r : ranges(L))
        if (k >= r.begin && k < r.begin + r.len) return r;
    throw std::out_of_range("coordinate outside the layout");
}

}  // namespace

std::string RnnLayout::slot_name(std::size_t k) const {
    Range r = range_of(*this, k);
    if (r.len == 1) return r.name;
    return std::string(r.name) + "[" + std::to_string(k - r.begin) + "]";
}

std::string RnnLayout::block_name(std::size_t k) const { return std::string(range_of(*this, k).name) + " block"; }

std::string RnnLayout::table() const {
    std::ostringstream os;
    for (const auto& r : ranges(*this)) {
        os << r.name << "\t" << r.begin;
        if (r.len > 1) os << ".." << r.begin + r.len - 1;
        os << "\n";
    }
    return os.str();
}

RefSequences reference_sequences(const RnnEncDec& rnn, const std::vector<RatVec>& X, std::size_t r) {
    rnn.validate();
    if (X.empty()) throw std::invalid_argument("reference sequences need at least one input vector");
    for (const auto& x : X)
        if (x.size() != rnn.d) throw ShapeError("rnn input has the wrong dimension");
    const std::size_t n = X.size(), d = rnn.d;
    RefSequences s;
    for (std::size_t i = 0; i <= r; ++i) {
        s.alpha.push_back(i == 0 ? RatVec(d) : X[std::min(i, n) - 1]);
        if (i == 0) s.beta.push_back(RatVec(d));
        else s.beta.push_back(sigma_pl(s.alpha[i] * rnn.W + s.beta[i - 1] * rnn.V));
        if (i <= n) s.gamma.push_back(RatVec(d));
        else if (i == n + 1) s.gamma.push_back(s.beta[n]);
        else s.gamma.push_back(sigma_pl(s.gamma[i - 1] * rnn.U));
        s.a.push_back(i > n ? 1 : 0);
        s.b.push_back(i == n + 1 ? 0 : 1);
        s.c.push_back(Rat(static_cast<long>(std::min(i, n))));
    }
    return s;
}

std::vector<RatVec> rnn_encoder_input(const RnnLayout& L, const std::vector<RatVec>& X) {
    std::vector<RatVec> out;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != L.d) throw ShapeError("rnn input has the wrong dimension");
        RatVec v(L.dim);
        for (std::size_t k = 0; k < L.d; ++k) v[L.B1 + k] = X[i][k];
        v[L.pos] = Rat(static_cast<long>(i + 1));
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

void copy_block(RatMat& m, std::size_t from, std::size_t to, std::size_t len, const Rat& coef = 1) {
    for (std::size_t k = 0; k < len; ++k) m(from + k, to + k) = coef;
}

DecLayerParams quiet_layer(const RnnLayout& L, FeedForward O) {
    const std::size_t D = L.dim;
    return DecLayerParams{FeedForward::zero(D, D), FeedForward::zero(D, D), FeedForward::zero(D, D),
                          std::move(O),          ScoreFn::mult_phi(),       ScoreFn::pos_diff(D, L.pos)};
}

}  // namespace

DecLayerParams build_rnn_step_layer(const RnnEncDec& rnn) {
    rnn.validate();
    RnnLayout L(rnn.d);
    const std::size_t D = L.dim, d = L.d;

    // f1: keep α, β, γ; a' = 1 − c_{i+1} + c_i, b' = c_{i+1} − c_i + a_i.
    RatMat m1(D, D);
    RatVec b1(D);
    copy_block(m1, L.B1, L.B1, 3 * d);
    m1(L.cc, L.a2) = -1;
    m1(L.c, L.a2) = 1;
    b1[L.a2] = 1;
    m1(L.cc, L.b2) = 1;
    m1(L.c, L.b2) = -1;
    m1(L.a, L.b2) = 1;

    // f2 under σ: β, γ, αW + βV, γU, β − b'·1, a', b'.
    RatMat m2(D, D);
    copy_block(m2, L.B2, L.B2, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            m2(L.B1 + i, L.B4 + j) = rnn.W(i, j);
            m2(L.B2 + i, L.B4 + j) = rnn.V(i, j);
            m2(L.B3 + i, L.B5 + j) = rnn.U(i, j);
        }
    copy_block(m2, L.B2, L.B6, d);
    for (std::size_t j = 0; j < d; ++j) m2(L.b2, L.B6 + j) = -1;
    m2(L.a2, L.a2) = 1;
    m2(L.b2, L.b2) = 1;

    // f3: β_{i+1} stays, γ_{i+1} = σ(γU) + (1 − b')β.
    RatMat m3(D, D);
    copy_block(m3, L.B4, L.B4, 2 * d);
    copy_block(m3, L.B6, L.B5, d);
    m3(L.a2, L.a2) = 1;
    m3(L.b2, L.b2) = 1;

    FeedForward O({Stage{AffineMap(std::move(m1), std::move(b1)), Activation::Identity},
                   Stage{AffineMap(std::move(m2)), Activation::Sigma},
                   Stage{AffineMap(std::move(m3)), Activation::Identity}});
    return quiet_layer(L, std::move(O));
}

DecLayerParams build_rnn_cleanup_layer(const RnnEncDec& rnn) {
    RnnLayout L(rnn.d);
    const std::size_t D = L.dim, d = L.d;
    // The forced cross attention adds α_{i+1} to B1 and c_{i+1} to cc again,
    // so O returns target − a for a = z¹ + that attention.
    RatMat m(D, D);
    copy_block(m, L.B1, L.B1, d, -1);
    copy_block(m, L.B2, L.B2, 2 * d, -1);
    copy_block(m, L.B4, L.B2, 2 * d);
    m(L.a, L.a) = -1;
    m(L.a2, L.a) = 1;
    m(L.b, L.b) = -1;
    m(L.b2, L.b) = 1;
    m(L.c, L.c) = -1;
    m(L.cc, L.c) = Rat(1, 2);
    m(L.cc, L.cc) = -1;
    copy_block(m, L.B4, L.B4, 3 * d, -1);
    for (std::size_t k : {L.a2, L.b2, L.spare, L.pos}) m(k, k) = -1;
    return quiet_layer(L, FeedForward::linear(std::move(m)));
}

Recognizer compile_rnn(const RnnSpec& spec) {
    const RnnEncDec& rnn = spec.rnn;
    rnn.validate();
    RnnLayout L(rnn.d);
    const std::size_t D = L.dim, d = L.d;
    Recognizer rec;
    rec.alphabet = spec.alphabet;
    for (const auto& sym : spec.alphabet) {
        const RatVec& f = spec.embed.at(sym);
        if (f.size() != d) throw ShapeError("embedding of " + sym + " has the wrong dimension");
        RatVec v(D);
        for (std::size_t k = 0; k < d; ++k) v[L.B1 + k] = f[k];
        rec.embed[sym] = std::move(v);
    }
    rec.posenc.terms = {PosTerm{L.pos, 1, 1}};

    rec.params.dim = D;
    rec.params.enc_layers = {EncLayerParams{FeedForward::zero(D, D), FeedForward::zero(D, D),
                                            FeedForward::zero(D, D), FeedForward::zero(D, D),
                                            ScoreFn::mult_phi()}};
    rec.params.final_K = FeedForward::identity();
    RatMat v(D, D);
    copy_block(v, L.B1, L.B1, d);
    v(L.pos, L.cc) = 1;
    rec.params.final_V = FeedForward::linear(std::move(v));
    rec.params.dec_layers = {build_rnn_step_layer(rnn), build_rnn_cleanup_layer(rnn)};
    rec.params.final_F = FeedForward::identity();
    rec.params.validate();

    rec.seed = RatVec(D);
    rec.seed[L.b] = 1;
    rec.final_pred = spec.accept.shifted(L.B3);
    rec.final_pred.clauses.push_back(Clause::equals(L.a, 1));
    for (std::size_t k = 0; k < D; ++k) rec.slot_names.push_back(L.slot_name(k));
    return rec;
}

RatVec expected_rnn_output(const RnnLayout& L, const RefSequences& seq, std::size_t i) {
    RatVec y(L.dim);
    for (std::size_t k = 0; k < L.d; ++k) {
        y[L.B2 + k] = seq.beta.at(i)[k];
        y[L.B3 + k] = seq.gamma.at(i)[k];
    }
    y[L.a] = seq.a.at(i);
    y[L.b] = seq.b.at(i);
    y[L.c] = seq.c.at(i);
    return y;
}

}  // namespace turingnet
