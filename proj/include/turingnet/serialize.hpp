#pragma once

#include <json.hpp>
#include <string>

#include "turingnet/neural_gpu.hpp"
#include "turingnet/rnn_compiler.hpp"
#include "turingnet/transformer.hpp"
#include "turingnet/turing_machine.hpp"

namespace turingnet {

using Json = nlohmann::ordered_json;

/// Parses a machine document and checks every compiler assumption.
TuringMachine parse_tm_spec(const std::string& text);
/// Parses a machine document that may use stay moves, omit transitions and
/// omit "read_state".
TuringMachine parse_general_tm_spec(const std::string& text);
std::string serialize_tm(const TuringMachine& tm);

RnnSpec parse_rnn_spec(const std::string& text);
std::string serialize_rnn_spec(const RnnSpec& spec);

Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);
Json vec_to_json(const RatVec& v);
RatVec vec_from_json(const Json& j);
Json mat_to_json(const RatMat& m);
RatMat mat_from_json(const Json& j);
Json ffn_to_json(const FeedForward& f);
FeedForward ffn_from_json(const Json& j);
Json score_to_json(const ScoreFn& s);
ScoreFn score_from_json(const Json& j);
Json predicate_to_json(const Predicate& p);
Predicate predicate_from_json(const Json& j);

Json recognizer_to_json(const Recognizer& rec);
Recognizer recognizer_from_json(const Json& j);
std::string serialize_recognizer(const Recognizer& rec);
Recognizer parse_recognizer(const std::string& text);

Json ngpu_to_json(const NGPURecognizer& rec);
NGPURecognizer ngpu_from_json(const Json& j);
std::string serialize_ngpu(const NGPURecognizer& rec);
NGPURecognizer parse_ngpu(const std::string& text);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace turingnet
