#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "turingnet/rational.hpp"

namespace turingnet {

/// Piecewise-linear sigmoid: clamp to [0, 1].
Rat sigma_pl(const Rat& x);
Rat relu_pl(const Rat& x);
RatVec sigma_pl(const RatVec& x);
RatVec relu_pl(const RatVec& x);

enum class Activation { Identity, Sigma, Relu };

std::string activation_name(Activation a);
Activation parse_activation(const std::string& name);
Rat activate(Activation a, const Rat& x);

/// x ↦ x·matrix + bias. The matrix is in-dim × out-dim.
class AffineMap {
public:
    AffineMap() = default;
    AffineMap(RatMat matrix, RatVec bias);
    explicit AffineMap(RatMat matrix);

    std::size_t in_dim() const { return m_.rows(); }
    std::size_t out_dim() const { return m_.cols(); }
    const RatMat& matrix() const { return m_; }
    const RatVec& bias() const { return b_; }

    RatVec apply(const RatVec& x) const;

private:
    RatMat m_;
    RatVec b_;
    // Non-zero entries of each matrix row, used to skip zeros in apply().
    std::vector<std::vector<std::pair<std::size_t, Rat>>> rows_nz_;
};

struct Stage {
    AffineMap map;
    Activation act = Activation::Identity;
};

/// Sequence of (affine map, activation) stages. No stages means the identity.
class FeedForward {
public:
    FeedForward() = default;
    explicit FeedForward(std::vector<Stage> stages);

    static FeedForward identity() { return {}; }
    /// The map sending every vector of `in` entries to the zero vector of `out` entries.
    static FeedForward zero(std::size_t in, std::size_t out);
    static FeedForward linear(RatMat m, Activation act = Activation::Identity);
    static FeedForward affine(RatMat m, RatVec b, Activation act = Activation::Identity);

    const std::vector<Stage>& stages() const { return stages_; }
    bool is_identity() const { return stages_.empty(); }
    std::optional<std::size_t> in_dim() const;
    std::optional<std::size_t> out_dim() const;

    RatVec apply(const RatVec& x) const;
    /// Runs `this` first, then `next`.
    FeedForward then(const FeedForward& next) const;

private:
    std::vector<Stage> stages_;
};

RatVec ffn_apply(const FeedForward& f, const RatVec& x);

/// Intermediate values of one stage: the affine output before the activation
/// and the value after it.
struct StageTrace {
    RatVec pre;
    RatVec post;
};
std::vector<StageTrace> ffn_trace(const FeedForward& f, const RatVec& x);

}  // namespace turingnet
