#include "turingnet/neural_gpu.hpp"

#include <stdexcept>

namespace turingnet {

Tensor3::Tensor3(std::size_t h, std::size_t w, std::size_t d)
    : h_(h), w_(w), d_(d), cells_(h * w, RatVec(d)) {}

KernelBank::KernelBank(std::size_t kH, std::size_t kW, std::size_t d_in, std::size_t d_out)
    : kH_(kH), kW_(kW), din_(d_in), dout_(d_out), mats_(kH * kW, RatMat(d_in, d_out)) {}

std::string padding_name(Padding p) { return p == Padding::Zero ? "zero" : "circular"; }

Padding parse_padding(const std::string& name) {
    if (name == "zero") return Padding::Zero;
    if (name == "circular") return Padding::Circular;
    throw ParseError("unknown padding \"" + name + "\"");
}

Tensor3 conv3(const KernelBank& K, const Tensor3& S, Padding padding) {
    if (K.d_in() != S.d())
        throw ShapeError("convolution: kernel depth " + std::to_string(K.d_in()) + " vs tensor depth " +
                         std::to_string(S.d()));
    const long h = static_cast<long>(S.h()), w = static_cast<long>(S.w());
    const long oH = static_cast<long>(K.kH() / 2), oW = static_cast<long>(K.kW() / 2);
    Tensor3 out(S.h(), S.w(), K.d_out());
    for (long i = 0; i < h; ++i)
        for (long j = 0; j < w; ++j) {
            RatVec& acc = out.cell(i, j);
            for (std::size_t u = 0; u < K.kH(); ++u) {
                long si = i + static_cast<long>(u) - oH;
                if (padding == Padding::Circular) si = ((si % h) + h) % h;
                if (si < 0 || si >= h) continue;
                for (std::size_t v = 0; v < K.kW(); ++v) {
                    long sj = j + static_cast<long>(v) - oW;
                    if (sj < 0 || sj >= w) continue;
                    const RatVec& s = S.cell(si, sj);
                    if (s.is_zero()) continue;
                    acc += s * K.at(u, v);
                }
            }
        }
    return out;
}

void NGPUParams::validate() const {
    const std::size_t d = depth();
    for (const KernelBank* k : {&KU, &KR, &KF})
        if (k->d_in() != d || k->d_out() != d || k->kH() == 0 || k->kW() == 0)
            throw ShapeError("kernel banks must be (kH, kW, d, d) with d = " + std::to_string(d));
    for (const RatMat* b : {&BU, &BR, &BF})
        if (b->rows() != width() || b->cols() != d)
            throw ShapeError("bias matrices must all be " + std::to_string(width()) + "x" + std::to_string(d));
}

namespace {

Tensor3 gate(const KernelBank& K, const RatMat& B, Activation f, const Tensor3& S, Padding padding) {
    Tensor3 G = conv3(K, S, padding);
    for (std::size_t i = 0; i < G.h(); ++i)
        for (std::size_t j = 0; j < G.w(); ++j) {
            RatVec& c = G.cell(i, j);
            c += B.row(j);
            for (std::size_t k = 0; k < c.size(); ++k) c[k] = activate(f, c[k]);
        }
    return G;
}

void check_unit(const Tensor3& G, const char* name) {
    for (std::size_t i = 0; i < G.h(); ++i)
        for (std::size_t j = 0; j < G.w(); ++j)
            for (std::size_t k = 0; k < G.d(); ++k) {
                const Rat& x = G.cell(i, j)[k];
                if (x < 0 || x > 1)
                    throw std::domain_error(std::string(name) + " gate entry " + x.str() + " at (" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                            std::to_string(k + 1) + ") is outside [0,1]");
            }
}

}  // namespace

NGPUStep ngpu_step_detailed(const Tensor3& S, const NGPUParams& p) {
    p.validate();
    if (S.w() != p.width() || S.d() != p.depth()) throw ShapeError("tensor shape does not match the network");
    NGPUStep st;
    st.U = gate(p.KU, p.BU, p.fU, S, p.padding);
    st.R = gate(p.KR, p.BR, p.fR, S, p.padding);
    check_unit(st.U, "update");
    check_unit(st.R, "reset");
    Tensor3 RS(S.h(), S.w(), S.d());
    for (std::size_t i = 0; i < S.h(); ++i)
        for (std::size_t j = 0; j < S.w(); ++j)
            for (std::size_t k = 0; k < S.d(); ++k) RS.cell(i, j)[k] = st.R.cell(i, j)[k] * S.cell(i, j)[k];
    Tensor3 F = gate(p.KF, p.BF, p.fF, RS, p.padding);
    st.S = Tensor3(S.h(), S.w(), S.d());
    for (std::size_t i = 0; i < S.h(); ++i)
        for (std::size_t j = 0; j < S.w(); ++j)
            for (std::size_t k = 0; k < S.d(); ++k) {
                const Rat& u = st.U.cell(i, j)[k];
                st.S.cell(i, j)[k] = u * S.cell(i, j)[k] + (Rat(1) - u) * F.cell(i, j)[k];
            }
    return st;
}

Tensor3 ngpu_step(const Tensor3& S, const NGPUParams& p) { return ngpu_step_detailed(S, p).S; }

Tensor3 ngpu_input(const std::vector<RatVec>& X, const NGPUParams& p) {
    Tensor3 S(X.size(), p.width(), p.depth());
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != p.depth()) throw ShapeError("input vector does not match the network depth");
        S.cell(i, 0) = X[i];
    }
    return S;
}

std::vector<Tensor3> ngpu_iterates(const Tensor3& S0, std::size_t r, const NGPUParams& p) {
    std::vector<Tensor3> out{S0};
    for (std::size_t t = 0; t < r; ++t) out.push_back(ngpu_step(out.back(), p));
    return out;
}

std::vector<RatVec> ngpu_run(const std::vector<RatVec>& X, std::size_t r, const NGPUParams& p) {
    if (X.empty()) throw std::invalid_argument("the Neural GPU needs at least one input vector");
    std::vector<RatVec> ys;
    Tensor3 S = ngpu_input(X, p);
    for (std::size_t t = 0; t < r; ++t) {
        S = ngpu_step(S, p);
        ys.push_back(S.cell(X.size() - 1, 0));
    }
    return ys;
}

RatVec CompiledNGPU::lift(const RatVec& x) const {
    if (x.size() != d) throw ShapeError("input vector does not match the rnn dimension");
    RatVec v(3 * d + 3);
    for (std::size_t k = 0; k < d; ++k) v[k] = x[k];
    v[3 * d] = 1;
    v[3 * d + 1] = 1;
    return v;
}

std::vector<RatVec> CompiledNGPU::lift(const std::vector<RatVec>& X) const {
    std::vector<RatVec> out;
    for (const auto& x : X) out.push_back(lift(x));
    return out;
}

CompiledNGPU compile_rnn_to_ngpu(const RnnEncDec& rnn) {
    rnn.validate();
    const std::size_t d = rnn.d, D = 3 * d + 3;
    const std::size_t E = 0, Dd = d, G = 2 * d, g0 = 3 * d, g1 = g0 + 1, g2 = g0 + 2;
    CompiledNGPU c;
    c.d = d;
    NGPUParams& p = c.params;
    p.KU = p.KR = p.KF = KernelBank(2, 1, D, D);
    auto put = [](RatMat& m, std::size_t r0, std::size_t c0, const RatMat& b) { m.set_block(r0, c0, b); };

    // F: the previous row's D block feeds V, the current row's E block feeds
    // W, and the decoder block G advances by U.
    RatMat& F1 = p.KF.at(0, 0);
    RatMat& F2 = p.KF.at(1, 0);
    put(F1, Dd, E, rnn.V);
    put(F1, Dd, Dd, rnn.V);
    F1(g0, g0) = 1;
    put(F2, E, E, rnn.W);
    put(F2, E, Dd, rnn.W);
    put(F2, Dd, G, rnn.U);
    put(F2, G, G, rnn.U);
    F2(g0, g1) = 1;

    RatMat& U1 = p.KU.at(0, 0);
    RatMat& U2 = p.KU.at(1, 0);
    for (std::size_t k = 0; k < d; ++k) {
        U1(g0, E + k) = 1;
        U1(g0, Dd + k) = 1;
        U2(g0, G + k) = 1;
    }
    U1(g0, g0) = 1;
    U1(g0, g1) = 1;
    U2(g0, g2) = 1;

    RatMat& R2 = p.KR.at(1, 0);
    for (std::size_t k = 0; k < d; ++k) {
        R2(g0, E + k) = 1;
        R2(g1, Dd + k) = 1;
    }
    R2(g0, g0) = 1;
    R2(g1, g1) = 1;

    p.BU = RatMat(1, D);
    p.BF = RatMat(1, D);
    p.BR = RatMat(1, D);
    for (std::size_t k = 0; k < d; ++k) p.BR(0, G + k) = 1;
    p.BR(0, g2) = 1;
    p.fU = p.fR = p.fF = Activation::Sigma;
    p.padding = Padding::Zero;
    p.validate();
    return c;
}

NGPURecognizer compile_ngpu_recognizer(const RnnSpec& spec) {
    NGPURecognizer rec;
    CompiledNGPU c = compile_rnn_to_ngpu(spec.rnn);
    rec.params = c.params;
    rec.alphabet = spec.alphabet;
    for (const auto& a : spec.alphabet) rec.embed[a] = c.lift(spec.embed.at(a));
    rec.accept = spec.accept.shifted(2 * c.d);
    rec.accept.clauses.push_back(Clause::equals(3 * c.d + 1, 0));
    return rec;
}

Decision ngpu_accepts(const NGPURecognizer& rec, std::string_view w, std::size_t max_steps) {
    std::vector<RatVec> X;
    for (const auto& s : tokenize(rec.alphabet, w)) X.push_back(rec.embed.at(s));
    if (X.empty()) throw std::invalid_argument("the Neural GPU needs at least one input symbol");
    Tensor3 S = ngpu_input(X, rec.params);
    for (std::size_t t = 1; t <= max_steps; ++t) {
        S = ngpu_step(S, rec.params);
        if (rec.accept(S.cell(X.size() - 1, 0))) return Decision{true, t};
    }
    return Decision{false, max_steps};
}

RatVec ngpu_expected_row(const RnnEncDec& rnn, const std::vector<RatVec>& X, std::size_t i, std::size_t t) {
    const std::size_t d = rnn.d;
    RatVec row(3 * d + 3);
    if (i > t) {
        for (std::size_t k = 0; k < d; ++k) row[k] = X.at(i - 1)[k];
        row[3 * d] = 1;
        row[3 * d + 1] = 1;
        return row;
    }
    std::vector<RatVec> prefix(X.begin(), X.begin() + i);
    RatVec h = rnn_run(rnn, prefix, 0).h.back();
    if (i == t) {
        for (std::size_t k = 0; k < d; ++k) row[k] = row[d + k] = h[k];
        row[3 * d + 1] = 1;
        return row;
    }
    RatVec a = h;
    for (std::size_t j = 0; j < t - i; ++j) a = sigma_pl(a * rnn.U);
    for (std::size_t k = 0; k < d; ++k) row[2 * d + k] = a[k];
    return row;
}

bool is_row_periodic(const Tensor3& S, std::size_t period) {
    if (period == 0 || S.h() % period != 0) return false;
    for (std::size_t i = period; i < S.h(); ++i)
        for (std::size_t j = 0; j < S.w(); ++j)
            if (!(S.cell(i, j) == S.cell(i - period, j))) return false;
    return true;
}

namespace {

std::optional<std::string> circular_preconditions(const NGPUParams& p, const Tensor3& S, std::size_t period) {
    if (p.padding != Padding::Circular) return "the network does not use circular padding";
    if (period == 0 || S.h() % period != 0)
        return "period " + std::to_string(period) + " does not divide the height " + std::to_string(S.h());
    if (!is_row_periodic(S, period)) return "the initial tensor is not periodic with period " + std::to_string(period);
    return std::nullopt;
}

}  // namespace

PeriodicityReport check_periodicity(const NGPUParams& p, const Tensor3& S0, std::size_t period, std::size_t T) {
    PeriodicityReport rep;
    rep.precondition_error = circular_preconditions(p, S0, period);
    if (rep.precondition_error) return rep;
    Tensor3 S = S0;
    for (std::size_t t = 1; t <= T; ++t) {
        S = ngpu_step(S, p);
        if (!is_row_periodic(S, period)) {
            rep.periodic = false;
            rep.first_failure = t;
            return rep;
        }
    }
    return rep;
}

PeriodicityReport check_prefix_agreement(const NGPUParams& p, const Tensor3& S, const Tensor3& S2,
                                         std::size_t period, std::size_t T) {
    PeriodicityReport rep;
    rep.precondition_error = circular_preconditions(p, S, period);
    if (!rep.precondition_error) rep.precondition_error = circular_preconditions(p, S2, period);
    if (rep.precondition_error) return rep;
    auto same_prefix = [&](const Tensor3& a, const Tensor3& b) {
        for (std::size_t i = 0; i < period; ++i)
            for (std::size_t j = 0; j < a.w(); ++j)
                if (!(a.cell(i, j) == b.cell(i, j))) return false;
        return true;
    };
    if (!same_prefix(S, S2)) {
        rep.precondition_error = "the tensors differ on their first " + std::to_string(period) + " rows";
        return rep;
    }
    Tensor3 a = S, b = S2;
    for (std::size_t t = 1; t <= T; ++t) {
        a = ngpu_step(a, p);
        b = ngpu_step(b, p);
        if (!same_prefix(a, b)) {
            rep.periodic = false;
            rep.first_failure = t;
            return rep;
        }
    }
    return rep;
}

}  // namespace turingnet
