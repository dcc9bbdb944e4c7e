#pragma once

#include <optional>
#include <string>
#include <vector>

#include "turingnet/ffn.hpp"
#include "turingnet/rnn_compiler.hpp"

namespace turingnet {

/// h×w grid of d-vectors. Indices are 0-based: cell(i, j) is S_{i+1,j+1,:}.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(std::size_t h, std::size_t w, std::size_t d);

    std::size_t h() const { return h_; }
    std::size_t w() const { return w_; }
    std::size_t d() const { return d_; }
    RatVec& cell(std::size_t i, std::size_t j) { return cells_[i * w_ + j]; }
    const RatVec& cell(std::size_t i, std::size_t j) const { return cells_[i * w_ + j]; }

    friend bool operator==(const Tensor3& a, const Tensor3& b) {
        return a.h_ == b.h_ && a.w_ == b.w_ && a.d_ == b.d_ && a.cells_ == b.cells_;
    }

private:
    std::size_t h_ = 0, w_ = 0, d_ = 0;
    std::vector<RatVec> cells_;
};

/// kH×kW grid of d_in×d_out matrices; at(u, v) is K_{u+1,v+1,:,:}.
class KernelBank {
public:
    KernelBank() = default;
    KernelBank(std::size_t kH, std::size_t kW, std::size_t d_in, std::size_t d_out);

    std::size_t kH() const { return kH_; }
    std::size_t kW() const { return kW_; }
    std::size_t d_in() const { return din_; }
    std::size_t d_out() const { return dout_; }
    RatMat& at(std::size_t u, std::size_t v) { return mats_[u * kW_ + v]; }
    const RatMat& at(std::size_t u, std::size_t v) const { return mats_[u * kW_ + v]; }

private:
    std::size_t kH_ = 0, kW_ = 0, din_ = 0, dout_ = 0;
    std::vector<RatMat> mats_;
};

enum class Padding { Zero, Circular };

std::string padding_name(Padding p);
Padding parse_padding(const std::string& name);

/// Kernel-bank convolution. Rows outside the tensor are zero under zero
/// padding and wrap modulo h under circular padding; columns are always
/// zero-padded.
Tensor3 conv3(const KernelBank& K, const Tensor3& S, Padding padding);

/// Uniform Neural GPU: each bias is a w×d matrix repeated over every row.
struct NGPUParams {
    KernelBank KU, KR, KF;
    RatMat BU, BR, BF;
    Activation fU = Activation::Sigma, fR = Activation::Sigma, fF = Activation::Sigma;
    Padding padding = Padding::Zero;

    std::size_t width() const { return BU.rows(); }
    std::size_t depth() const { return BU.cols(); }
    void validate() const;
};

struct NGPUStep {
    Tensor3 U, R, S;
};

/// One gated update. Throws std::domain_error if a gate entry leaves [0,1].
NGPUStep ngpu_step_detailed(const Tensor3& S, const NGPUParams& p);
Tensor3 ngpu_step(const Tensor3& S, const NGPUParams& p);

/// S with S_{i,1,:} = x_i and zero columns after the first.
Tensor3 ngpu_input(const std::vector<RatVec>& X, const NGPUParams& p);

/// S^0, S^1, …, S^r.
std::vector<Tensor3> ngpu_iterates(const Tensor3& S0, std::size_t r, const NGPUParams& p);

/// y_t = S^t_{n,1,:} for t = 1..r.
std::vector<RatVec> ngpu_run(const std::vector<RatVec>& X, std::size_t r, const NGPUParams& p);

struct CompiledNGPU {
    NGPUParams params;
    std::size_t d = 0;

    /// x ↦ [x, 0, 0, 1, 1, 0].
    RatVec lift(const RatVec& x) const;
    std::vector<RatVec> lift(const std::vector<RatVec>& X) const;
};

/// Kernels of shape (2, 1, 3d+3, 3d+3), σ activations, zero padding.
CompiledNGPU compile_rnn_to_ngpu(const RnnEncDec& rnn);

/// A Neural GPU used as a recognizer: symbols are embedded into the first
/// column and the output cell S^t_{n,1,:} is tested against `accept`.
struct NGPURecognizer {
    NGPUParams params;
    std::vector<std::string> alphabet;
    std::map<std::string, RatVec> embed;
    Predicate accept;
};

/// Embeds with [f(a), 0, 0, 1, 1, 0] and accepts when the decoder block
/// satisfies the rnn predicate and gadget slot 3d+1 is 0, which holds
/// exactly for t > n.
NGPURecognizer compile_ngpu_recognizer(const RnnSpec& spec);

Decision ngpu_accepts(const NGPURecognizer& rec, std::string_view w, std::size_t max_steps);

/// The row S^t_{i,1,:} the compiled network must hold (i, t 1-based):
/// [0,0,α^i_{t-i},0,0,0] for i < t, [h_i,h_i,0,0,1,0] for i = t and
/// [x_i,0,0,1,1,0] for i > t, with α^i_0 = h_i and α^i_j = σ(α^i_{j-1}U).
RatVec ngpu_expected_row(const RnnEncDec& rnn, const std::vector<RatVec>& X, std::size_t i, std::size_t t);

bool is_row_periodic(const Tensor3& S, std::size_t period);

struct PeriodicityReport {
    /// Set when the inputs do not meet the preconditions; nothing was run.
    std::optional<std::string> precondition_error;
    bool periodic = true;
    /// First iterate that lost the period, if any.
    std::optional<std::size_t> first_failure;
};

/// Iterates a circular network T times from S0 and checks that each iterate
/// keeps row period `period`.
PeriodicityReport check_periodicity(const NGPUParams& p, const Tensor3& S0, std::size_t period, std::size_t T);

/// Runs S and S' side by side for T steps and checks that their first
/// `period` rows agree at every step. Both must be period-`period` periodic
/// with equal first rows.
PeriodicityReport check_prefix_agreement(const NGPUParams& p, const Tensor3& S, const Tensor3& S2,
                                         std::size_t period, std::size_t T);

}  // namespace turingnet
