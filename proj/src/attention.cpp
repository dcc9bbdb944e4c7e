#include "turingnet/attention.hpp"

namespace turingnet {

Rat score_phi(const RatVec& q, const RatVec& k) { return -dot(q, k).abs(); }

FeedForward posdiff_network(std::size_t dim, std::size_t slot) {
    if (slot >= dim) throw ShapeError("positional slot outside the vector");
    // f1 picks e(q), e(k); f2 = relu([x−y, y−x]); f3([x,y]) = −x−y.
    RatMat pick(2 * dim, 2);
    pick(slot, 0) = 1;
    pick(dim + slot, 1) = 1;
    RatMat diff{{1, -1}, {-1, 1}};
    RatMat neg{{-1}, {-1}};
    return FeedForward({Stage{AffineMap(std::move(pick)), Activation::Identity},
                        Stage{AffineMap(std::move(diff)), Activation::Relu},
                        Stage{AffineMap(std::move(neg)), Activation::Identity}});
}

Rat score_posdiff(const RatVec& q, const RatVec& k) {
    if (q.size() != k.size() || q.size() == 0) throw ShapeError("score_posdiff: dimension mismatch");
    return ScoreFn::pos_diff(q.size(), q.size() - 1)(q, k);
}

ScoreFn ScoreFn::mult_phi() { return ScoreFn{}; }

ScoreFn ScoreFn::pos_diff(std::size_t dim, std::size_t slot) {
    ScoreFn s;
    s.kind_ = ScoreKind::PosDiff;
    s.dim_ = dim;
    s.slot_ = slot;
    s.net_ = std::make_shared<FeedForward>(posdiff_network(dim, slot));
    return s;
}

ScoreFn ScoreFn::net_defined(FeedForward net) {
    if (!net.out_dim() || *net.out_dim() != 1)
        throw ShapeError("score network must produce a single value");
    if (*net.in_dim() % 2 != 0) throw ShapeError("score network input must be [q‖k]");
    ScoreFn s;
    s.kind_ = ScoreKind::NetDefined;
    s.dim_ = *net.in_dim() / 2;
    s.net_ = std::make_shared<FeedForward>(std::move(net));
    return s;
}

Rat ScoreFn::operator()(const RatVec& q, const RatVec& k) const {
    if (q.size() != k.size())
        throw ShapeError("score: query has " + std::to_string(q.size()) + " entries, key has " +
                         std::to_string(k.size()));
    if (kind_ == ScoreKind::MultPhi) return score_phi(q, k);
    if (q.size() != dim_)
        throw ShapeError("score: network expects dimension " + std::to_string(dim_) + ", got " +
                         std::to_string(q.size()));
    return net_->apply(concat(q, k))[0];
}

std::vector<Rat> hardmax(const std::vector<Rat>& scores) {
    if (scores.empty()) throw std::invalid_argument("hardmax of an empty sequence");
    const Rat* best = &scores[0];
    for (const auto& s : scores)
        if (s > *best) best = &s;
    long r = 0;
    for (const auto& s : scores)
        if (s == *best) ++r;
    Rat w(1, r);
    std::vector<Rat> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] == *best) out[i] = w;
    return out;
}

Attended attend_detailed(const RatVec& q, std::span<const RatVec> keys,
                         std::span<const RatVec> values, const ScoreFn& score) {
    if (keys.empty()) throw std::invalid_argument("attention over an empty key set");
    if (keys.size() != values.size())
        throw ShapeError("attention: " + std::to_string(keys.size()) + " keys but " +
                         std::to_string(values.size()) + " values");
    std::vector<Rat> scores;
    scores.reserve(keys.size());
    for (const auto& k : keys) scores.push_back(score(q, k));
    Attended out;
    out.weights = hardmax(scores);
    // Sum the tied values first and scale once: the weights are all 1/r.
    RatVec sum(values[0].size());
    Rat w;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (out.weights[i].is_zero()) continue;
        sum += values[i];
        w = out.weights[i];
    }
    sum *= w;
    out.value = std::move(sum);
    return out;
}

RatVec attend(const RatVec& q, const KVPair& kv, const ScoreFn& score) {
    return attend_detailed(q, kv.keys, kv.values, score).value;
}

}  // namespace turingnet
