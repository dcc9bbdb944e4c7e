#pragma once

#include <string>
#include <vector>

#include "turingnet/transformer.hpp"
#include "turingnet/turing_machine.hpp"

namespace turingnet {

/// Slot offsets (0-based) of the d = 2|Q| + 4|Σ| + 11 coordinates:
///   group 1: q1 s1 x1
///   group 2: q2 s2 x2 x3 x4 x5
///   group 3: s3 x6 s4 x7
///   group 4: x8 x9 x10 x11
struct TMLayout {
    std::size_t nq = 0, ns = 0;
    std::size_t q1, s1, x1;
    std::size_t q2, s2, x2, x3, x4, x5;
    std::size_t s3, x6, s4, x7;
    std::size_t x8, x9, x10, x11;
    std::size_t dim;

    explicit TMLayout(const TuringMachine& tm);
    TMLayout(std::size_t states, std::size_t symbols);

    /// Name of coordinate k, e.g. "q2[read]" or "x4".
    std::string slot_name(const TuringMachine& tm, std::size_t k) const;
    /// Name of the block containing coordinate k, e.g. "q2 block".
    std::string block_name(std::size_t k) const;
    /// Text table of all slots, one range per line.
    std::string table(const TuringMachine& tm) const;
};

/// Enumerations used by the one-hot layouts (0-based).
struct OneHotCodec {
    std::size_t nq, ns;

    /// π(q, s) = π1(s)·|Q| + π2(q).
    std::size_t pair(std::size_t q, std::size_t s) const { return s * nq + q; }
    /// π'(q, s, m): pairs with m = -1 first, then m = +1.
    std::size_t triple(std::size_t q, std::size_t s, int m) const {
        return (m < 0 ? 0 : nq * ns) + pair(q, s);
    }
};

struct TMEmbedding {
    std::map<std::string, RatVec> embed;
    PosEnc posenc;
};

TMEmbedding build_tm_embedding(const TuringMachine& tm);

struct TMEncoder {
    EncLayerParams layer;
    FeedForward final_K, final_V;
};

TMEncoder build_tm_encoder(const TuringMachine& tm);

/// g1: [⟦q⟧, ⟦s⟧] ↦ v_(q,s) − 1, which after σ is ⟦(q,s)⟧.
AffineMap build_pair_encoder(const TuringMachine& tm);
/// M^δ: row π(q,s) holds ⟦δ(q,s)⟧ over the triple code; zero for accepting q.
RatMat build_transition_matrix(const TuringMachine& tm);
/// A: row π'(q,s,m) holds [⟦q⟧, ⟦s⟧, m].
RatMat build_decoder_matrix(const TuringMachine& tm);

/// Decoder layer 1 position-wise network O1 (one σ stage).
FeedForward build_transition_ffn(const TuringMachine& tm);
/// Same, with a caller-supplied M^δ (used for fault injection).
FeedForward build_transition_ffn(const TuringMachine& tm, const RatMat& transition);

DecLayerParams build_transition_layer(const TuringMachine& tm);
DecLayerParams build_head_position_layer(const TuringMachine& tm);
DecLayerParams build_last_write_layer(const TuringMachine& tm);

/// f([x‖y‖z‖b]) = [x‖y] if b = 0 and [x‖z] if b = 1, for binary inputs.
FeedForward build_if_gadget(std::size_t m, std::size_t n);

FeedForward build_output_F(const TuringMachine& tm);

/// Full recognizer: 1 encoder layer, 3 decoder layers, dimension 2|Q|+4|Σ|+11.
Recognizer compile_tm(const TuringMachine& tm);

/// The decoder output expected at step t: [⟦q^(t)⟧, ⟦s^(t)⟧, m^(t-1), 0, …].
RatVec expected_tm_output(const TuringMachine& tm, const TMTrace& trace, std::size_t t);

}  // namespace turingnet
