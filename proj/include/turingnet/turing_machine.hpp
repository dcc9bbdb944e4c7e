#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace turingnet {

/// A machine breaks one of the structural assumptions of the compiler, or
/// tried to move left of cell 0.
struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Transition {
    std::size_t next = 0;
    std::size_t write = 0;
    int move = 1;  // -1 left, +1 right, 0 stay (general machines only)
};

/// Deterministic single-tape machine. States and symbols are referred to by
/// their index in the declared lists.
///
/// With `read_state` set the machine uses the compiler's conventions: the
/// head starts on cell 0 holding the blank, the input occupies cells 1..n,
/// and moving left of cell 0 is an error. Without it the machine is
/// "general": input on cells 0..n-1, head on cell 0, a left move on cell 0
/// leaves the head in place, and stay moves are allowed.
struct TuringMachine {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::size_t blank = 0;
    std::size_t init = 0;
    std::optional<std::size_t> read_state;
    std::vector<std::size_t> accept;
    /// delta[q][s]; empty where undefined.
    std::vector<std::vector<std::optional<Transition>>> delta;
    /// Declaration order of the rules as (state, symbol) pairs.
    std::vector<std::pair<std::size_t, std::size_t>> rule_order;

    bool is_accepting(std::size_t q) const;
    std::size_t state_index(std::string_view name) const;
    std::size_t symbol_index(std::string_view name) const;
    const std::optional<Transition>& rule(std::size_t q, std::size_t s) const { return delta[q][s]; }
    /// Adds or replaces a rule, keeping declaration order.
    void set_rule(std::size_t q, std::size_t s, Transition t);
};

/// Throws NormalizationError unless `tm` meets every assumption the compiler
/// relies on: total transitions outside F, none from F, only L/R moves,
/// δ(init, #) = (read, #, R), and the reading phase (states reachable from
/// the read state on non-blank symbols) moving right.
void check_normalized(const TuringMachine& tm);

struct TMStep {
    std::size_t q = 0;           // q^(i)
    std::size_t s = 0;           // s^(i)
    std::optional<std::size_t> v;  // v^(i), absent on the last recorded step
    int m = 0;                   // m^(i), 0 when absent
    long c = 0;                  // c^(i)
    long ell = -1;               // ℓ(i); -1 for i = 0
};

struct TMTrace {
    std::size_t n = 0;
    std::vector<TMStep> steps;
    std::optional<std::size_t> accept_time;

    /// m^(i-1), with m^(-1) = 0.
    int m_before(std::size_t i) const { return i == 0 ? 0 : steps[i - 1].m; }
};

/// Runs a normalized machine for T steps or until it accepts.
TMTrace tm_trace(const TuringMachine& tm, std::string_view w, std::size_t T);

enum class RunOutcome { Accept, Reject, Undecided };

/// Runs a machine under its own conventions (see TuringMachine). A missing
/// transition rejects.
RunOutcome run_tm(const TuringMachine& tm, std::string_view w, std::size_t max_steps);

/// Converts a machine to one that satisfies check_normalized and accepts the
/// same language.
TuringMachine normalize_tm(const TuringMachine& general);

/// Input symbols: the alphabet minus the blank.
std::vector<std::string> input_symbols(const TuringMachine& tm);

/// Every word over the input symbols of length ≤ max_len, shortest first.
std::vector<std::string> all_words(const std::vector<std::string>& symbols, std::size_t max_len);

}  // namespace turingnet
