#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "turingnet/attention.hpp"
#include "turingnet/symbols.hpp"

namespace turingnet {

struct EncLayerParams {
    FeedForward Q, K, V, O;
    ScoreFn score;
};

struct DecLayerParams {
    FeedForward Qself, Kself, Vself, O;
    ScoreFn self_score, cross_score;
};

struct TransformerParams {
    std::size_t dim = 0;
    std::vector<EncLayerParams> enc_layers;
    FeedForward final_K, final_V;
    std::vector<DecLayerParams> dec_layers;
    FeedForward final_F;

    /// Checks layer counts and that every map preserves `dim`.
    void validate() const;
};

/// One term c·i^power of a positional encoding, placed at `slot`.
struct PosTerm {
    std::size_t slot = 0;
    Rat coef;
    int power = 0;  // one of 0, 1, -1, -2
};

/// pos(i) for positions i ≥ 1, as a sum of monomial terms.
/// No terms means the zero encoding.
struct PosEnc {
    std::vector<PosTerm> terms;

    RatVec at(std::size_t dim, std::size_t i) const;
    bool is_zero() const { return terms.empty(); }
};

enum class ClauseKind { Equals, GreaterThan, OneHotIn };

/// One conjunct of a final-set predicate. Equals and GreaterThan constrain
/// coordinate `begin`; OneHotIn requires entries [begin, end) to form a 0/1
/// one-hot vector whose hot offset is listed in `allowed`.
struct Clause {
    ClauseKind kind = ClauseKind::Equals;
    std::size_t begin = 0, end = 0;
    Rat value;
    std::vector<std::size_t> allowed;

    static Clause equals(std::size_t coord, Rat v);
    static Clause greater_than(std::size_t coord, Rat v);
    static Clause one_hot_in(std::size_t begin, std::size_t end, std::vector<std::size_t> allowed);
};

struct Predicate {
    std::vector<Clause> clauses;

    bool operator()(const RatVec& y) const;
    /// Copy with every coordinate moved by `offset`.
    Predicate shifted(std::size_t offset) const;
};

struct Recognizer {
    std::vector<std::string> alphabet;
    std::map<std::string, RatVec> embed;
    PosEnc posenc;
    TransformerParams params;
    RatVec seed;
    Predicate final_pred;
    /// Symbol fed to the encoder in place of the empty word, if any.
    std::optional<std::string> empty_word_symbol;
    /// Optional display names for the d coordinates.
    std::vector<std::string> slot_names;
};

/// x_i = embed(w_i) + pos(i) for i = 1..n.
std::vector<RatVec> embed_word(const Recognizer& rec, std::string_view w);

std::vector<RatVec> enc_layer(const std::vector<RatVec>& X, const EncLayerParams& p);
KVPair run_tenc(const std::vector<RatVec>& X, const TransformerParams& params);

/// Reference (non-incremental) decoder layer: position i attends to Y_1..Y_i.
std::vector<RatVec> dec_layer(const std::vector<RatVec>& Y, const KVPair& kv,
                              const DecLayerParams& p);

/// Per-layer intermediate values for the newest decoder position.
struct LayerStep {
    RatVec p, a, z;
    std::vector<Rat> self_weights, cross_weights;
};

struct DecoderStep {
    std::vector<LayerStep> layers;
    RatVec output;  // final_F applied to the last layer's z
};

/// Incremental decoder: earlier positions never change, so each layer keeps
/// the self-attention keys and values of the positions seen so far.
class Decoder {
public:
    Decoder(const TransformerParams& params, KVPair kv);

    /// Appends one decoder input vector ȳ and returns the new position's values.
    DecoderStep push(const RatVec& ybar);
    std::size_t length() const { return length_; }
    const KVPair& encoder_output() const { return kv_; }

private:
    const TransformerParams* params_;
    KVPair kv_;
    std::vector<std::vector<RatVec>> keys_, values_;
    std::size_t length_ = 0;
};

/// Produces y_1..y_r from encoder input X and seed y0.
std::vector<RatVec> run_trans(const std::vector<RatVec>& X, const RatVec& y0, std::size_t r,
                              const Recognizer& rec);

struct Decision {
    bool accepted = false;
    std::size_t step = 0;
};

Decision recognizer_accepts(std::string_view w, const Recognizer& rec, std::size_t max_steps);

/// Runs the recognizer for `r` steps and returns y_1..y_r.
std::vector<RatVec> run_recognizer(std::string_view w, const Recognizer& rec, std::size_t r);

}  // namespace turingnet
