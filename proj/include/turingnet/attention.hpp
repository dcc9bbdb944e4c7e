#pragma once

#include <memory>
#include <span>
#include <vector>

#include "turingnet/ffn.hpp"

namespace turingnet {

/// −|⟨q,k⟩|.
Rat score_phi(const RatVec& q, const RatVec& k);

/// The three-stage network over [q‖k] computing −|q[slot] − k[slot]| for
/// vectors of dimension `dim`.
FeedForward posdiff_network(std::size_t dim, std::size_t slot);

/// −|e(q) − e(k)| with e the last component, evaluated through posdiff_network.
Rat score_posdiff(const RatVec& q, const RatVec& k);

enum class ScoreKind { MultPhi, PosDiff, NetDefined };

class ScoreFn {
public:
    static ScoreFn mult_phi();
    static ScoreFn pos_diff(std::size_t dim, std::size_t slot);
    /// `net` maps [q‖k] to a single value.
    static ScoreFn net_defined(FeedForward net);

    ScoreKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    std::size_t slot() const { return slot_; }
    /// Network over [q‖k]; empty for MultPhi.
    const FeedForward& net() const { return *net_; }

    Rat operator()(const RatVec& q, const RatVec& k) const;

private:
    ScoreKind kind_ = ScoreKind::MultPhi;
    std::size_t dim_ = 0, slot_ = 0;
    std::shared_ptr<const FeedForward> net_ = std::make_shared<FeedForward>();
};

/// 1/r at each of the r positions attaining the maximum, 0 elsewhere.
std::vector<Rat> hardmax(const std::vector<Rat>& scores);

struct KVPair {
    std::vector<RatVec> keys;
    std::vector<RatVec> values;
};

struct Attended {
    RatVec value;
    std::vector<Rat> weights;
};

Attended attend_detailed(const RatVec& q, std::span<const RatVec> keys,
                         std::span<const RatVec> values, const ScoreFn& score);

RatVec attend(const RatVec& q, const KVPair& kv, const ScoreFn& score);

}  // namespace turingnet
