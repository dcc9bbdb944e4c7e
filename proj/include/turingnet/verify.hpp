#pragma once

#include <optional>
#include <string>
#include <vector>

#include "turingnet/rnn_compiler.hpp"
#include "turingnet/tm_compiler.hpp"

namespace turingnet {

/// First place where a compiled network and its reference disagree.
/// `step` is the decoder position i, i.e. the computation of y_{i+1} from
/// y_i; `stage` names the value compared ("layer 1", "output", …).
struct Divergence {
    std::string input;
    std::size_t step = 0;
    std::string stage;
    std::string slot;
    std::string block;
    Rat expected, got;

    std::string str() const;
};

struct VerifyReport {
    bool pass = true;
    std::optional<Divergence> divergence;
    /// Failed runtime checks that are not slot mismatches (for example a σ
    /// input outside the range the construction relies on).
    std::optional<std::string> failure;
    std::vector<std::string> warnings;
    std::size_t runs = 0;
    std::size_t positions = 0;

    std::string str() const;
};

/// z¹_i, z²_i and z³_i as the construction lays them out.
RatVec expected_tm_layer1(const TuringMachine& tm, const TMTrace& tr, const std::vector<std::size_t>& enc_input,
                          std::size_t i);
RatVec expected_tm_layer2(const TuringMachine& tm, const TMTrace& tr, const std::vector<std::size_t>& enc_input,
                          std::size_t i);
RatVec expected_tm_layer3(const TuringMachine& tm, const TMTrace& tr, const std::vector<std::size_t>& enc_input,
                          std::size_t i);

/// Symbol indices the encoder of a compiled machine reads for w (the blank
/// alone for the empty word).
std::vector<std::size_t> tm_encoder_symbols(const TuringMachine& tm, const std::string& w);

/// Runs `rec` (normally compile_tm(tm)) against tm_trace on every input for
/// up to `steps` decoder steps and stops at the first divergence. Also checks
/// that the layer-2 self-attention ties everywhere, that layer 3 attends to
/// ℓ(i+1) alone, and that every σ input is an integer or
/// lies in [0,1].
VerifyReport verify_tm(const TuringMachine& tm, const Recognizer& rec, const std::vector<std::string>& inputs,
                       std::size_t steps);

/// z¹_i of the RNN construction.
RatVec expected_rnn_layer1(const RnnLayout& L, const RefSequences& seq, std::size_t i);

/// Runs `rec` (normally compile_rnn(spec)) against reference_sequences and
/// rnn_run, checking β and γ stay in [0,1].
VerifyReport verify_rnn(const RnnSpec& spec, const Recognizer& rec, const std::vector<std::string>& inputs,
                        std::size_t steps);

/// Checks the compiled Neural GPU row invariant at every t ≤ steps and the
/// decoder readout S^{n+t}_{n,1,:} = [0, 0, g_t, 0, 0, 0].
VerifyReport verify_ngpu(const RnnSpec& spec, const std::vector<std::string>& inputs, std::size_t steps);

}  // namespace turingnet
