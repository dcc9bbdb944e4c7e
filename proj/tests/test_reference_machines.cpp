#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "turingnet/serialize.hpp"

using namespace turingnet;

namespace {

TuringMachine fixture(const std::string& name) { return parse_tm_spec(read_file(FIXTURE_DIR "/" + name)); }

bool is_anbn(const std::string& w) {
    std::size_t k = w.size() / 2;
    return w.size() % 2 == 0 && w == std::string(k, 'a') + std::string(k, 'b');
}

struct Sim {
    std::map<long, std::size_t> tape;
    long head = 0;
    std::size_t q;
};

}  // namespace

TEST_CASE("word enumeration") {
    auto ws = all_words({"a", "b"}, 3);
    CHECK(ws.size() == 15);
    CHECK(ws.front().empty());
    CHECK(ws[1] == "a");
    CHECK(ws.back() == "bbb");
    CHECK(tokenize({"ab", "a", "b"}, "aab") == std::vector<std::string>{"a", "ab"});
    CHECK_THROWS(tokenize({"a"}, "ac"));
}

TEST_CASE("fixture machines decide their languages") {
    auto even = fixture("even_ones.json");
    auto anbn = fixture("anbn.json");
    auto succ = fixture("unary_succ.json");
    for (const auto& w : all_words(input_symbols(even), 8)) {
        bool want = std::count(w.begin(), w.end(), '1') % 2 == 0;
        CHECK((run_tm(even, w, 100) == RunOutcome::Accept) == want);
    }
    for (const auto& w : all_words(input_symbols(anbn), 8))
        CHECK((run_tm(anbn, w, 400) == RunOutcome::Accept) == is_anbn(w));
    for (std::size_t n = 0; n <= 8; ++n) {
        auto tr = tm_trace(succ, std::string(n, '1'), 200);
        REQUIRE(tr.accept_time);
        CHECK(*tr.accept_time == 2 * n + 3);
    }
}

TEST_CASE("trace quantities agree with a direct simulation") {
    for (const char* name : {"even_ones.json", "anbn.json", "unary_succ.json", "zigzag.json"}) {
        auto tm = fixture(name);
        for (const auto& w : all_words(input_symbols(tm), 5)) {
            TMTrace tr = tm_trace(tm, w, 200);
            Sim sim;
            sim.q = tm.init;
            auto syms = tokenize(tm.alphabet, w);
            for (std::size_t k = 0; k < syms.size(); ++k) sim.tape[long(k) + 1] = tm.symbol_index(syms[k]);
            std::map<long, std::size_t> last_visit;
            for (std::size_t i = 0; i < tr.steps.size(); ++i) {
                const TMStep& st = tr.steps[i];
                auto it = sim.tape.find(sim.head);
                std::size_t s = it == sim.tape.end() ? tm.blank : it->second;
                CHECK(st.q == sim.q);
                CHECK(st.s == s);
                CHECK(st.c == sim.head);
                if (i > 0) {
                    // ℓ(i): the last earlier step at cell c^(i); step i-1 when the cell is new.
                    auto lv = last_visit.find(sim.head);
                    CHECK(st.ell == (lv == last_visit.end() ? long(i) - 1 : long(lv->second)));
                }
                last_visit[sim.head] = i;
                if (tm.is_accepting(sim.q)) {
                    CHECK(tr.accept_time == i);
                    CHECK_FALSE(st.v);
                    break;
                }
                if (i + 1 == tr.steps.size()) {
                    CHECK_FALSE(st.v);  // cut off at T
                    break;
                }
                const auto& t = tm.rule(sim.q, s);
                REQUIRE(t);
                CHECK(st.v == t->write);
                CHECK(st.m == t->move);
                sim.tape[sim.head] = t->write;
                sim.head += t->move;
                sim.q = t->next;
            }
        }
    }
}

TEST_CASE("zigzag head moves on the empty word") {
    TMTrace tr = tm_trace(fixture("zigzag.json"), "", 10);
    std::vector<int> m;
    for (const auto& st : tr.steps)
        if (st.v) m.push_back(st.m);
    CHECK(m == std::vector<int>{1, -1, 1, 1, 1});
}

TEST_CASE("structural checks") {
    auto tm = fixture("even_ones.json");
    check_normalized(tm);

    auto broken = tm;
    broken.delta[tm.state_index("odd")][tm.symbol_index("1")].reset();
    CHECK_THROWS_AS(check_normalized(broken), NormalizationError);

    broken = tm;
    broken.set_rule(tm.init, tm.blank, Transition{tm.state_index("odd"), tm.blank, 1});
    CHECK_THROWS_AS(check_normalized(broken), NormalizationError);

    broken = tm;
    broken.set_rule(tm.state_index("even"), tm.symbol_index("0"), Transition{tm.state_index("even"), 0, -1});
    CHECK_THROWS_AS(check_normalized(broken), NormalizationError);

    broken = tm;
    broken.set_rule(tm.state_index("acc"), tm.blank, Transition{tm.state_index("acc"), tm.blank, 1});
    CHECK_THROWS_AS(check_normalized(broken), NormalizationError);
}

TEST_CASE("general machines and normalization") {
    auto general = parse_general_tm_spec(read_file(FIXTURE_DIR "/general_stay.json"));
    auto oracle = [](const std::string& w) {
        return !w.empty() && w[0] == 'a' && std::all_of(w.begin() + 1, w.end(), [](char c) { return c == 'b'; });
    };
    for (const auto& w : all_words({"a", "b"}, 6)) CHECK((run_tm(general, w, 200) == RunOutcome::Accept) == oracle(w));

    TuringMachine norm = normalize_tm(general);
    check_normalized(norm);
    for (const auto& w : all_words({"a", "b"}, 6))
        CHECK((run_tm(norm, w, 2000) == RunOutcome::Accept) == oracle(w));

    // Normalizing a machine that already meets the conventions keeps its language.
    auto even = fixture("even_ones.json");
    auto again = normalize_tm(even);
    for (const auto& w : all_words({"0", "1"}, 6))
        CHECK((run_tm(again, w, 500) == RunOutcome::Accept) == (run_tm(even, w, 500) == RunOutcome::Accept));
}

TEST_CASE("a normalized machine must not move left of cell 0") {
    auto tm = fixture("unary_succ.json");
    tm.set_rule(tm.state_index("back"), tm.blank, Transition{tm.state_index("back"), tm.blank, -1});
    CHECK_THROWS_AS(tm_trace(tm, "1", 50), NormalizationError);
}
