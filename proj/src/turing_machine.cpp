#include "turingnet/turing_machine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "turingnet/symbols.hpp"

namespace turingnet {

bool TuringMachine::is_accepting(std::size_t q) const {
    return std::find(accept.begin(), accept.end(), q) != accept.end();
}

std::size_t TuringMachine::state_index(std::string_view name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw std::invalid_argument("unknown state \"" + std::string(name) + "\"");
    return static_cast<std::size_t>(it - states.begin());
}

std::size_t TuringMachine::symbol_index(std::string_view name) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), name);
    if (it == alphabet.end()) throw std::invalid_argument("unknown symbol \"" + std::string(name) + "\"");
    return static_cast<std::size_t>(it - alphabet.begin());
}

void TuringMachine::set_rule(std::size_t q, std::size_t s, Transition t) {
    if (delta.size() < states.size()) delta.resize(states.size());
    for (auto& row : delta) row.resize(alphabet.size());
    if (!delta[q][s]) rule_order.emplace_back(q, s);
    delta[q][s] = t;
}

namespace {

std::string rule_name(const TuringMachine& tm, std::size_t q, std::size_t s) {
    return "(" + tm.states[q] + ", " + tm.alphabet[s] + ")";
}

}  // namespace

void check_normalized(const TuringMachine& tm) {
    const std::size_t nq = tm.states.size(), ns = tm.alphabet.size();
    if (tm.blank >= ns) throw NormalizationError("blank symbol is not in the alphabet");
    if (!tm.read_state) throw NormalizationError("machine has no read state");
    const std::size_t read = *tm.read_state;
    if (tm.init >= nq || read >= nq) throw NormalizationError("init or read state out of range");
    if (tm.init == read) throw NormalizationError("init and read states must differ");
    if (tm.is_accepting(tm.init)) throw NormalizationError("the initial state must not be accepting");
    if (tm.delta.size() != nq) throw NormalizationError("transition table has the wrong number of states");
    for (std::size_t q = 0; q < nq; ++q) {
        if (tm.delta[q].size() != ns) throw NormalizationError("transition table has the wrong width");
        for (std::size_t s = 0; s < ns; ++s) {
            const auto& t = tm.delta[q][s];
            if (tm.is_accepting(q)) {
                if (t) throw NormalizationError("accepting state has a transition " + rule_name(tm, q, s));
                continue;
            }
            if (!t) throw NormalizationError("missing transition " + rule_name(tm, q, s));
            if (t->move != 1 && t->move != -1)
                throw NormalizationError("transition " + rule_name(tm, q, s) + " does not move the head");
            if (t->next >= nq || t->write >= ns)
                throw NormalizationError("transition " + rule_name(tm, q, s) + " is out of range");
        }
    }
    const auto& first = tm.delta[tm.init][tm.blank];
    if (first->next != read || first->write != tm.blank || first->move != 1)
        throw NormalizationError("the initial transition must be (" + tm.states[tm.init] + ", " +
                                 tm.alphabet[tm.blank] + ") -> (" + tm.states[read] + ", " +
                                 tm.alphabet[tm.blank] + ", R)");
    // While reading the input the head must move right on every step.
    std::set<std::size_t> seen{read};
    std::vector<std::size_t> todo{read};
    while (!todo.empty()) {
        std::size_t q = todo.back();
        todo.pop_back();
        if (tm.is_accepting(q)) continue;
        for (std::size_t s = 0; s < ns; ++s) {
            if (s == tm.blank) continue;
            const auto& t = tm.delta[q][s];
            if (t->move != 1)
                throw NormalizationError("reading-phase transition " + rule_name(tm, q, s) +
                                         " must move right");
            if (seen.insert(t->next).second) todo.push_back(t->next);
        }
    }
}

namespace {

std::vector<std::size_t> word_symbols(const TuringMachine& tm, std::string_view w) {
    std::vector<std::size_t> out;
    for (const auto& sym : tokenize(input_symbols(tm), w)) out.push_back(tm.symbol_index(sym));
    return out;
}

}  // namespace

TMTrace tm_trace(const TuringMachine& tm, std::string_view w, std::size_t T) {
    if (!tm.read_state) throw NormalizationError("tm_trace needs a normalized machine");
    std::vector<std::size_t> input = word_symbols(tm, w);
    TMTrace tr;
    tr.n = input.size();
    std::map<long, std::size_t> tape;
    for (std::size_t k = 0; k < input.size(); ++k) tape[static_cast<long>(k) + 1] = input[k];
    std::map<long, std::size_t> last_visit;
    std::size_t q = tm.init;
    long head = 0;
    for (std::size_t i = 0;; ++i) {
        TMStep st;
        st.q = q;
        st.c = head;
        auto cell = tape.find(head);
        st.s = cell == tape.end() ? tm.blank : cell->second;
        if (i > 0) {
            auto lv = last_visit.find(head);
            st.ell = lv == last_visit.end() ? static_cast<long>(i) - 1 : static_cast<long>(lv->second);
        }
        last_visit[head] = i;
        if (tm.is_accepting(q)) {
            tr.steps.push_back(st);
            tr.accept_time = i;
            break;
        }
        if (i == T) {
            tr.steps.push_back(st);
            break;
        }
        const auto& t = tm.rule(q, st.s);
        if (!t) throw NormalizationError("no transition for " + rule_name(tm, q, st.s));
        if (t->move != 1 && t->move != -1)
            throw NormalizationError("transition " + rule_name(tm, q, st.s) + " does not move the head");
        st.v = t->write;
        st.m = t->move;
        tr.steps.push_back(st);
        tape[head] = t->write;
        head += t->move;
        if (head < 0)
            throw NormalizationError("head moved left of cell 0 at step " + std::to_string(i + 1));
        q = t->next;
    }
    return tr;
}

RunOutcome run_tm(const TuringMachine& tm, std::string_view w, std::size_t max_steps) {
    std::vector<std::size_t> input = word_symbols(tm, w);
    const bool general = !tm.read_state;
    std::map<long, std::size_t> tape;
    for (std::size_t k = 0; k < input.size(); ++k)
        tape[static_cast<long>(k) + (general ? 0 : 1)] = input[k];
    std::size_t q = tm.init;
    long head = 0;
    for (std::size_t i = 0;; ++i) {
        if (tm.is_accepting(q)) return RunOutcome::Accept;
        if (i == max_steps) return RunOutcome::Undecided;
        auto cell = tape.find(head);
        std::size_t s = cell == tape.end() ? tm.blank : cell->second;
        const auto& t = tm.delta[q][s];
        if (!t) return RunOutcome::Reject;
        tape[head] = t->write;
        head += t->move;
        if (head < 0) {
            if (!general) throw NormalizationError("head moved left of cell 0");
            head = 0;
        }
        q = t->next;
    }
}

std::vector<std::string> input_symbols(const TuringMachine& tm) {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < tm.alphabet.size(); ++s)
        if (s != tm.blank) out.push_back(tm.alphabet[s]);
    return out;
}

std::vector<std::string> all_words(const std::vector<std::string>& symbols, std::size_t max_len) {
    std::vector<std::string> out{""};
    std::size_t from = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t to = out.size();
        for (std::size_t k = from; k < to; ++k)
            for (const auto& a : symbols) out.push_back(out[k] + a);
        from = to;
    }
    return out;
}

namespace {

/// Builder for the normalized machine: names are made unique on insertion.
struct MachineBuilder {
    TuringMachine tm;

    std::size_t add_state(std::string name) {
        while (std::find(tm.states.begin(), tm.states.end(), name) != tm.states.end()) name += "'";
        tm.states.push_back(name);
        return tm.states.size() - 1;
    }

    std::size_t add_symbol(std::string name) {
        static const char* candidates[] = {"$", "^", "@", "%", "&", "!", "~", "|"};
        for (const char* c : candidates)
            if (std::find(tm.alphabet.begin(), tm.alphabet.end(), c) == tm.alphabet.end()) {
                tm.alphabet.push_back(c);
                return tm.alphabet.size() - 1;
            }
        while (std::find(tm.alphabet.begin(), tm.alphabet.end(), name) != tm.alphabet.end()) name += "'";
        tm.alphabet.push_back(name);
        return tm.alphabet.size() - 1;
    }

    void rule(std::size_t q, std::size_t s, std::size_t next, std::size_t write, int move) {
        tm.set_rule(q, s, Transition{next, write, move});
    }
};

/// Stay moves become a right move into a fresh state that steps back left;
/// missing transitions go to a rejecting sink that runs right forever.
/// `map_state` sends old state indices to new ones.
void lower_rules(const TuringMachine& src, MachineBuilder& b, const std::vector<std::size_t>& map_state,
                 std::size_t symbol_count) {
    std::map<std::size_t, std::size_t> stay_state;
    std::optional<std::size_t> reject;
    auto reject_state = [&]() {
        if (!reject) reject = b.add_state("reject");
        return *reject;
    };
    std::vector<std::pair<std::size_t, std::size_t>> order = src.rule_order;
    for (std::size_t q = 0; q < src.states.size(); ++q)
        for (std::size_t s = 0; s < symbol_count; ++s)
            if (!src.delta[q][s]) order.emplace_back(q, s);
    for (auto [q, s] : order) {
        if (src.is_accepting(q)) continue;
        const auto& t = src.delta[q][s];
        std::size_t nq = map_state[q];
        if (!t) {
            b.rule(nq, s, reject_state(), s, 1);
            continue;
        }
        std::size_t target = map_state[t->next];
        if (t->move != 0 || src.is_accepting(t->next)) {
            b.rule(nq, s, target, t->write, t->move == 0 ? 1 : t->move);
            continue;
        }
        auto it = stay_state.find(target);
        if (it == stay_state.end())
            it = stay_state.emplace(target, b.add_state("stay_" + b.tm.states[target])).first;
        b.rule(nq, s, it->second, t->write, 1);
    }
    for (auto [target, st] : stay_state)
        for (std::size_t s = 0; s < b.tm.alphabet.size(); ++s) b.rule(st, s, target, s, -1);
    if (reject)
        for (std::size_t s = 0; s < b.tm.alphabet.size(); ++s) b.rule(*reject, s, *reject, s, 1);
}

}  // namespace

TuringMachine normalize_tm(const TuringMachine& g) {
    MachineBuilder b;
    if (g.read_state) {
        // Already follows the compiler's tape conventions; only stay moves and
        // missing transitions need rewriting.
        b.tm.states = g.states;
        b.tm.alphabet = g.alphabet;
        b.tm.blank = g.blank;
        b.tm.init = g.init;
        b.tm.read_state = g.read_state;
        b.tm.accept = g.accept;
        b.tm.delta.assign(g.states.size(), std::vector<std::optional<Transition>>(g.alphabet.size()));
        std::vector<std::size_t> ident(g.states.size());
        for (std::size_t q = 0; q < ident.size(); ++q) ident[q] = q;
        lower_rules(g, b, ident, g.alphabet.size());
        check_normalized(b.tm);
        return b.tm;
    }

    // General machine: shift the input one cell right behind a boundary
    // marker, then run the machine, bouncing off the marker.
    b.tm.alphabet = g.alphabet;
    b.tm.blank = g.blank;
    const std::size_t nsym = g.alphabet.size();
    const std::size_t marker = b.add_symbol("$");
    const std::size_t blank = g.blank;
    std::vector<std::size_t> inputs;
    for (std::size_t s = 0; s < nsym; ++s)
        if (s != blank) inputs.push_back(s);

    b.tm.init = b.add_state("start");
    b.tm.read_state = b.add_state("read");
    const std::size_t rewind = b.add_state("rewind");
    const std::size_t shift = b.add_state("shift");
    std::map<std::size_t, std::size_t> carry;
    for (std::size_t s : inputs) carry[s] = b.add_state("carry_" + g.alphabet[s]);
    const std::size_t settle = b.add_state("settle");
    std::vector<std::size_t> map_state(g.states.size());
    for (std::size_t q = 0; q < g.states.size(); ++q) map_state[q] = b.add_state(g.states[q]);
    for (std::size_t q : g.accept) b.tm.accept.push_back(map_state[q]);
    const std::size_t q0 = map_state[g.init];
    const std::size_t read = *b.tm.read_state;
    b.tm.delta.assign(b.tm.states.size(), std::vector<std::optional<Transition>>(b.tm.alphabet.size()));

    const std::size_t nall = b.tm.alphabet.size();
    for (std::size_t s = 0; s < nall; ++s) b.rule(b.tm.init, s, read, s, 1);
    for (std::size_t s = 0; s < nall; ++s) b.rule(read, s, s == blank ? rewind : read, s, s == blank ? -1 : 1);
    for (std::size_t s = 0; s < nall; ++s) b.rule(rewind, s, s == blank ? shift : rewind, s, s == blank ? 1 : -1);
    for (std::size_t s = 0; s < nall; ++s) {
        if (s == blank) b.rule(shift, s, q0, marker, 1);
        else if (s == marker) b.rule(shift, s, shift, s, 1);
        else b.rule(shift, s, carry[s], marker, 1);
    }
    for (auto [x, cx] : carry)
        for (std::size_t s = 0; s < nall; ++s) {
            if (s == blank) b.rule(cx, s, settle, x, -1);
            else if (s == marker) b.rule(cx, s, cx, s, 1);
            else b.rule(cx, s, carry[s], x, 1);
        }
    for (std::size_t s = 0; s < nall; ++s)
        b.rule(settle, s, s == marker ? q0 : settle, s, s == marker ? 1 : -1);
    for (std::size_t q = 0; q < g.states.size(); ++q)
        if (!g.is_accepting(q)) b.rule(map_state[q], marker, map_state[q], marker, 1);
    lower_rules(g, b, map_state, nsym);
    check_normalized(b.tm);
    return b.tm;
}

}  // namespace turingnet
