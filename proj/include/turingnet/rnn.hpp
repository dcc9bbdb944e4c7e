#pragma once

#include <vector>

#include "turingnet/rational.hpp"

namespace turingnet {

/// Encoder h_i = σ(x_i W + h_{i-1} V), decoder g_t = σ(g_{t-1} U), g_0 = h_n.
struct RnnEncDec {
    std::size_t d = 0;
    RatMat W, V, U;

    void validate() const;
};

struct RnnRun {
    std::vector<RatVec> h;  // h_0 .. h_n
    std::vector<RatVec> g;  // g_0 .. g_r
};

RnnRun rnn_run(const RnnEncDec& rnn, const std::vector<RatVec>& X, std::size_t r);

}  // namespace turingnet
