#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "turingnet/analysis.hpp"
#include "turingnet/serialize.hpp"
#include "turingnet/verify.hpp"

using namespace turingnet;

namespace {

std::string fixture_text(const std::string& name) { return read_file(FIXTURE_DIR "/" + name); }

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

const char* kMinimal = R"({
  "states": ["init", "read", "acc"],
  "alphabet": ["1", "#"],
  "blank": "#",
  "init": "init",
  "read_state": "read",
  "accept": ["acc"],
  "delta": [
    {"state": "init", "read": "#", "next": "read", "write": "#", "move": "R"},
    {"state": "init", "read": "1", "next": "read", "write": "1", "move": "R"},
    {"state": "read", "read": "1", "next": "read", "write": "1", "move": "R"},
    {"state": "read", "read": "#", "next": "acc", "write": "#", "move": "R"}
  ]
})";

}  // namespace

TEST_CASE("fixtures round-trip byte for byte") {
    for (const char* name : {"even_ones.json", "anbn.json", "unary_succ.json", "zigzag.json"}) {
        std::string text = fixture_text(name);
        CHECK(serialize_tm(parse_tm_spec(text)) == text);
    }
    std::string general = fixture_text("general_stay.json");
    CHECK(serialize_tm(parse_general_tm_spec(general)) == general);
    std::string rnn = fixture_text("b_then_a.json");
    CHECK(serialize_rnn_spec(parse_rnn_spec(rnn)) == rnn);
}

TEST_CASE("machine documents are validated") {
    CHECK(parse_tm_spec(kMinimal).states.size() == 3);

    std::string stay = std::string(kMinimal);
    stay.replace(stay.rfind("\"R\""), 3, "\"S\"");
    std::string msg = error_of([&] { parse_tm_spec(stay); });
    CHECK(msg.find("(read, #)") != std::string::npos);
    CHECK(msg.find("\"S\"") != std::string::npos);

    std::string unknown = std::string(kMinimal);
    unknown.insert(1, "\"colour\": \"red\",");
    CHECK(error_of([&] { parse_tm_spec(unknown); }).find("colour") != std::string::npos);

    std::string blank = std::string(kMinimal);
    blank.replace(blank.find("\"blank\": \"#\""), 12, "\"blank\": \"_\"");
    CHECK_THROWS_AS(parse_tm_spec(blank), ParseError);

    std::string missing = std::string(kMinimal);
    auto at = missing.find("    {\"state\": \"read\", \"read\": \"1\"");
    missing.erase(at, missing.find('\n', at) - at + 1);
    CHECK_THROWS(parse_tm_spec(missing));

    CHECK_THROWS_AS(parse_tm_spec("{"), ParseError);
    CHECK_THROWS_AS(parse_general_tm_spec(fixture_text("even_ones.json") + "x"), ParseError);
}

TEST_CASE("compiled networks survive serialization") {
    for (const char* name : {"even_ones.json", "zigzag.json"}) {
        TuringMachine tm = parse_tm_spec(fixture_text(name));
        Recognizer rec = compile_tm(tm);
        std::string text = serialize_recognizer(rec);
        Recognizer back = parse_recognizer(text);
        CHECK(serialize_recognizer(back) == text);
        for (const auto& w : all_words(input_symbols(tm), 3)) CHECK(run_recognizer(w, back, 20) == run_recognizer(w, rec, 20));
    }
    RnnSpec spec = parse_rnn_spec(fixture_text("b_then_a.json"));
    Recognizer rnn = compile_rnn(spec);
    CHECK(serialize_recognizer(parse_recognizer(serialize_recognizer(rnn))) == serialize_recognizer(rnn));
    NGPURecognizer ng = compile_ngpu_recognizer(spec);
    std::string nt = serialize_ngpu(ng);
    NGPURecognizer ng2 = parse_ngpu(nt);
    CHECK(serialize_ngpu(ng2) == nt);
    CHECK(ngpu_accepts(ng2, "bba", 8).accepted);
    Recognizer maj = majority_recognizer();
    CHECK(serialize_recognizer(parse_recognizer(serialize_recognizer(maj))) == serialize_recognizer(maj));
}

TEST_CASE("verification passes on correct compilations") {
    TuringMachine tm = parse_tm_spec(fixture_text("anbn.json"));
    VerifyReport rep = verify_tm(tm, compile_tm(tm), all_words(input_symbols(tm), 4), 80);
    CHECK(rep.pass);
    CHECK(rep.runs == 31);
    CHECK(rep.str().rfind("PASS", 0) == 0);

    RnnSpec spec = parse_rnn_spec(fixture_text("b_then_a.json"));
    auto words = all_words(spec.alphabet, 4);
    CHECK(verify_rnn(spec, compile_rnn(spec), words, 10).pass);
    VerifyReport ng = verify_ngpu(spec, words, 10);
    CHECK(ng.pass);
    CHECK_FALSE(ng.warnings.empty());  // the empty word is skipped
}

TEST_CASE("zero steps is a vacuous pass") {
    TuringMachine tm = parse_tm_spec(fixture_text("even_ones.json"));
    VerifyReport rep = verify_tm(tm, compile_tm(tm), {"01"}, 0);
    CHECK(rep.pass);
    REQUIRE(rep.warnings.size() == 1);
    CHECK(rep.warnings[0] == "steps = 0: nothing to compare");
}

TEST_CASE("a corrupted transition row is caught where it is first used") {
    TuringMachine tm = parse_tm_spec(fixture_text("unary_succ.json"));
    Recognizer rec = compile_tm(tm);
    OneHotCodec code{tm.states.size(), tm.alphabet.size()};
    RatMat M = build_transition_matrix(tm);
    std::size_t q = tm.state_index("back"), s = tm.symbol_index("1");
    std::size_t row = code.pair(q, s);
    for (std::size_t c = 0; c < M.cols(); ++c) M(row, c) = 0;
    M(row, code.triple(tm.state_index("read"), s, -1)) = 1;
    rec.params.dec_layers[0].O = build_transition_ffn(tm, M);

    // On "1", (back, 1) is first used at step 3: init → read → read(#) → back on cell 1.
    VerifyReport rep = verify_tm(tm, rec, {"", "1"}, 20);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.divergence);
    CHECK(rep.divergence->input == "1");
    CHECK(rep.divergence->step == 3);
    CHECK(rep.divergence->stage == "layer 1");
    CHECK(rep.divergence->block == "q2 block");
    CHECK(rep.str().rfind("FAIL input \"1\" step 3", 0) == 0);
}

TEST_CASE("corrupted rnn weights are reported") {
    RnnSpec spec = parse_rnn_spec(fixture_text("b_then_a.json"));
    Recognizer rec = compile_rnn(spec);
    RnnSpec other = spec;
    other.rnn.U(0, 0) = 0;
    VerifyReport rep = verify_rnn(other, rec, {"ba"}, 6);
    CHECK_FALSE(rep.pass);
}
