#include "turingnet/ffn.hpp"

namespace turingnet {

Rat sigma_pl(const Rat& x) {
    if (x.sign() < 0) return Rat(0);
    if (x > Rat(1)) return Rat(1);
    return x;
}

Rat relu_pl(const Rat& x) { return x.sign() < 0 ? Rat(0) : x; }

RatVec sigma_pl(const RatVec& x) {
    RatVec y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = sigma_pl(x[i]);
    return y;
}

RatVec relu_pl(const RatVec& x) {
    RatVec y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = relu_pl(x[i]);
    return y;
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Sigma: return "sigma";
        case Activation::Relu: return "relu";
    }
    return "identity";
}

Activation parse_activation(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "sigma") return Activation::Sigma;
    if (name == "relu") return Activation::Relu;
    throw ParseError("unknown activation \"" + name + "\"");
}

Rat activate(Activation a, const Rat& x) {
    switch (a) {
        case Activation::Sigma: return sigma_pl(x);
        case Activation::Relu: return relu_pl(x);
        case Activation::Identity: break;
    }
    return x;
}

AffineMap::AffineMap(RatMat matrix, RatVec bias) : m_(std::move(matrix)), b_(std::move(bias)) {
    if (b_.size() != m_.cols())
        throw ShapeError("affine map: bias has " + std::to_string(b_.size()) +
                         " entries, matrix has " + std::to_string(m_.cols()) + " columns");
    rows_nz_.resize(m_.rows());
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = 0; j < m_.cols(); ++j)
            if (!m_(i, j).is_zero()) rows_nz_[i].emplace_back(j, m_(i, j));
}

AffineMap::AffineMap(RatMat matrix) : AffineMap(matrix, RatVec(matrix.cols())) {}

RatVec AffineMap::apply(const RatVec& x) const {
    if (x.size() != in_dim())
        throw ShapeError("affine map expects " + std::to_string(in_dim()) + " inputs, got " +
                         std::to_string(x.size()));
    RatVec y = b_;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (const auto& [j, m] : rows_nz_[i]) y[j] += x[i] * m;
    }
    return y;
}

FeedForward::FeedForward(std::vector<Stage> stages) : stages_(std::move(stages)) {
    for (std::size_t k = 1; k < stages_.size(); ++k)
        if (stages_[k].map.in_dim() != stages_[k - 1].map.out_dim())
            throw ShapeError("stage " + std::to_string(k) + ": input dimension " +
                             std::to_string(stages_[k].map.in_dim()) +
                             " does not match previous output " +
                             std::to_string(stages_[k - 1].map.out_dim()));
}

FeedForward FeedForward::zero(std::size_t in, std::size_t out) {
    return linear(RatMat(in, out));
}

FeedForward FeedForward::linear(RatMat m, Activation act) {
    return FeedForward({Stage{AffineMap(std::move(m)), act}});
}

FeedForward FeedForward::affine(RatMat m, RatVec b, Activation act) {
    return FeedForward({Stage{AffineMap(std::move(m), std::move(b)), act}});
}

std::optional<std::size_t> FeedForward::in_dim() const {
    if (stages_.empty()) return std::nullopt;
    return stages_.front().map.in_dim();
}

std::optional<std::size_t> FeedForward::out_dim() const {
    if (stages_.empty()) return std::nullopt;
    return stages_.back().map.out_dim();
}

RatVec FeedForward::apply(const RatVec& x) const {
    RatVec v = x;
    for (std::size_t k = 0; k < stages_.size(); ++k) {
        const Stage& s = stages_[k];
        if (v.size() != s.map.in_dim())
            throw ShapeError("stage " + std::to_string(k) + ": expected input dimension " +
                             std::to_string(s.map.in_dim()) + ", got " + std::to_string(v.size()));
        v = s.map.apply(v);
        if (s.act != Activation::Identity)
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = activate(s.act, v[i]);
    }
    return v;
}

FeedForward FeedForward::then(const FeedForward& next) const {
    std::vector<Stage> all = stages_;
    all.insert(all.end(), next.stages_.begin(), next.stages_.end());
    return FeedForward(std::move(all));
}

RatVec ffn_apply(const FeedForward& f, const RatVec& x) { return f.apply(x); }

std::vector<StageTrace> ffn_trace(const FeedForward& f, const RatVec& x) {
    std::vector<StageTrace> out;
    RatVec v = x;
    for (std::size_t k = 0; k < f.stages().size(); ++k) {
        const Stage& s = f.stages()[k];
        if (v.size() != s.map.in_dim())
            throw ShapeError("stage " + std::to_string(k) + ": expected input dimension " +
                             std::to_string(s.map.in_dim()) + ", got " + std::to_string(v.size()));
        StageTrace t;
        t.pre = s.map.apply(v);
        t.post = t.pre;
        for (std::size_t i = 0; i < t.post.size(); ++i) t.post[i] = activate(s.act, t.pre[i]);
        v = t.post;
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace turingnet
