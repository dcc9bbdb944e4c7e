#pragma once

#include <map>
#include <string>
#include <vector>

#include "turingnet/rnn.hpp"
#include "turingnet/transformer.hpp"

namespace turingnet {

/// An RNN encoder-decoder together with its input embedding and the
/// accepting predicate on decoder states (coordinates 0..d-1).
struct RnnSpec {
    RnnEncDec rnn;
    std::vector<std::string> alphabet;
    std::map<std::string, RatVec> embed;
    Predicate accept;
};

/// Slot offsets (0-based) of the 6d+8 coordinates:
///   B1 B2 B3 | a b c cc | B4 B5 B6 | a' b' spare pos
/// B1 holds α (the input), B2 β, B3 γ; B4..B6 hold the successor values and
/// scratch; cc receives c_{i+1} from the cross attention.
struct RnnLayout {
    std::size_t d;
    std::size_t B1, B2, B3, a, b, c, cc, B4, B5, B6, a2, b2, spare, pos;
    std::size_t dim;

    explicit RnnLayout(std::size_t d);

    std::string slot_name(std::size_t k) const;
    std::string block_name(std::size_t k) const;
    std::string table() const;
};

struct RefSequences {
    std::vector<RatVec> alpha, beta, gamma;
    std::vector<Rat> a, b, c;
};

/// α, β, γ, a, b, c for 0 ≤ i ≤ r, straight from their recursive definitions,
/// with β_i = σ(α_i W + β_{i-1} V) matching rnn_run.
RefSequences reference_sequences(const RnnEncDec& rnn, const std::vector<RatVec>& X, std::size_t r);

/// Encoder input [x_i, 0, …, 0, i] for raw input vectors.
std::vector<RatVec> rnn_encoder_input(const RnnLayout& L, const std::vector<RatVec>& X);

DecLayerParams build_rnn_step_layer(const RnnEncDec& rnn);
DecLayerParams build_rnn_cleanup_layer(const RnnEncDec& rnn);

Recognizer compile_rnn(const RnnSpec& spec);

/// y_i = [0, β_i, γ_i, a_i, b_i, c_i, 0, …, 0].
RatVec expected_rnn_output(const RnnLayout& L, const RefSequences& seq, std::size_t i);

}  // namespace turingnet
