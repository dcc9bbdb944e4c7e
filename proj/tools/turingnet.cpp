#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "turingnet/analysis.hpp"
#include "turingnet/serialize.hpp"
#include "turingnet/verify.hpp"

using namespace turingnet;

namespace {

/// Failure of the checked property (as opposed to bad usage or input).
struct CheckFailed {};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<std::string> read_words(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> words;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        words.push_back(line);
    }
    return words;
}

enum class SpecKind { Machine, Rnn, Transformer, Ngpu };

SpecKind detect(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    if (j.contains("format")) {
        if (j["format"] == "transformer") return SpecKind::Transformer;
        if (j["format"] == "ngpu") return SpecKind::Ngpu;
        throw ParseError("unknown network format");
    }
    if (j.contains("states")) return SpecKind::Machine;
    if (j.contains("d")) return SpecKind::Rnn;
    throw ParseError("cannot tell whether this is a machine, an rnn or a network");
}

std::string slot_label(const std::vector<std::string>& names, std::size_t k) {
    return k < names.size() ? names[k] : "y" + std::to_string(k);
}

std::string named_nonzero(const RatVec& y, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t k = 0; k < y.size(); ++k)
        if (!y[k].is_zero()) out += " " + slot_label(names, k) + "=" + y[k].str();
    return out.empty() ? " (zero)" : out;
}

void print_outputs(const std::vector<RatVec>& ys, const std::vector<std::string>& names, bool trace, bool tsv,
                   const Predicate& accept) {
    if (tsv) {
        std::cout << "step";
        if (!ys.empty())
            for (std::size_t k = 0; k < ys[0].size(); ++k) std::cout << "\t" << slot_label(names, k);
        std::cout << "\taccept\n";
        for (std::size_t t = 0; t < ys.size(); ++t) {
            std::cout << t + 1;
            for (const auto& x : ys[t]) std::cout << "\t" << x;
            std::cout << "\t" << (accept(ys[t]) ? 1 : 0) << "\n";
        }
        return;
    }
    std::optional<std::size_t> first;
    for (std::size_t t = 0; t < ys.size(); ++t) {
        bool acc = accept(ys[t]);
        if (acc && !first) first = t + 1;
        if (trace) std::cout << "y" << t + 1 << ":" << named_nonzero(ys[t], names) << (acc ? "  [accept]" : "") << "\n";
    }
    if (!trace && !ys.empty()) std::cout << "y" << ys.size() << ":" << named_nonzero(ys.back(), names) << "\n";
    if (first) std::cout << "accepted at step " << *first << "\n";
    else std::cout << "not accepted within " << ys.size() << " steps\n";
}

int cmd_compile_tm(const std::string& in, const std::string& out, bool layout) {
    TuringMachine tm = parse_tm_spec(read_file(in));
    Recognizer rec = compile_tm(tm);
    if (layout) std::cout << TMLayout(tm).table(tm);
    if (!out.empty() || !layout) write_output(out, serialize_recognizer(rec));
    return 0;
}

int cmd_compile_rnn(const std::string& in, const std::string& out, bool layout) {
    RnnSpec spec = parse_rnn_spec(read_file(in));
    Recognizer rec = compile_rnn(spec);
    if (layout) std::cout << RnnLayout(spec.rnn.d).table();
    if (!out.empty() || !layout) write_output(out, serialize_recognizer(rec));
    return 0;
}

int cmd_compile_ngpu(const std::string& in, const std::string& out) {
    RnnSpec spec = parse_rnn_spec(read_file(in));
    write_output(out, serialize_ngpu(compile_ngpu_recognizer(spec)));
    return 0;
}

int cmd_run(const std::string& net, const std::string& input, std::size_t steps, bool trace, bool tsv) {
    std::string text = read_file(net);
    SpecKind kind = detect(text);
    if (kind == SpecKind::Transformer) {
        Recognizer rec = parse_recognizer(text);
        print_outputs(run_recognizer(input, rec, steps), rec.slot_names, trace, tsv, rec.final_pred);
        return 0;
    }
    if (kind == SpecKind::Ngpu) {
        NGPURecognizer rec = parse_ngpu(text);
        std::vector<RatVec> X;
        for (const auto& s : tokenize(rec.alphabet, input)) X.push_back(rec.embed.at(s));
        print_outputs(ngpu_run(X, steps, rec.params), {}, trace, tsv, rec.accept);
        return 0;
    }
    throw ParseError("run expects a compiled network; use compile-tm or compile-rnn first");
}

/// Corrupts M^δ so that the rule for (state, symbol) goes to the next
/// state in declaration order.
Recognizer corrupted(const TuringMachine& tm, Recognizer rec, const std::string& rule) {
    auto colon = rule.find(':');
    if (colon == std::string::npos) throw ParseError("--corrupt expects state:symbol");
    std::size_t q = tm.state_index(rule.substr(0, colon));
    std::size_t s = tm.symbol_index(rule.substr(colon + 1));
    const auto& t = tm.rule(q, s);
    if (!t) throw ParseError("no rule for " + rule);
    OneHotCodec code{tm.states.size(), tm.alphabet.size()};
    RatMat M = build_transition_matrix(tm);
    std::size_t row = code.pair(q, s);
    for (std::size_t c = 0; c < M.cols(); ++c) M(row, c) = 0;
    M(row, code.triple((t->next + 1) % tm.states.size(), t->write, t->move)) = 1;
    rec.params.dec_layers[0].O = build_transition_ffn(tm, M);
    return rec;
}

int cmd_verify(const std::string& spec_path, const std::string& inputs_path, std::optional<std::size_t> max_len,
               std::size_t steps, const std::string& net_path, const std::string& corrupt, bool ngpu) {
    std::string text = read_file(spec_path);
    SpecKind kind = detect(text);
    std::vector<std::string> inputs;
    if (!inputs_path.empty()) inputs = read_words(inputs_path);
    VerifyReport rep;
    if (kind == SpecKind::Machine) {
        TuringMachine tm = parse_tm_spec(text);
        if (max_len) inputs = all_words(input_symbols(tm), *max_len);
        Recognizer rec = net_path.empty() ? compile_tm(tm) : parse_recognizer(read_file(net_path));
        if (!corrupt.empty()) rec = corrupted(tm, std::move(rec), corrupt);
        rep = verify_tm(tm, rec, inputs, steps);
    } else if (kind == SpecKind::Rnn) {
        RnnSpec spec = parse_rnn_spec(text);
        if (max_len) inputs = all_words(spec.alphabet, *max_len);
        if (!corrupt.empty()) throw ParseError("--corrupt applies to machines only");
        if (ngpu) {
            rep = verify_ngpu(spec, inputs, steps);
        } else {
            Recognizer rec = net_path.empty() ? compile_rnn(spec) : parse_recognizer(read_file(net_path));
            rep = verify_rnn(spec, rec, inputs, steps);
        }
    } else {
        throw ParseError("verify expects a machine or rnn file, not a compiled network");
    }
    std::cout << rep.str();
    if (!rep.pass) throw CheckFailed{};
    return 0;
}

int cmd_trace(const std::string& path, const std::string& input, std::size_t steps, bool tsv) {
    TuringMachine tm = parse_tm_spec(read_file(path));
    TMTrace tr = tm_trace(tm, input, steps);
    std::map<long, std::size_t> tape;
    auto syms = tokenize(tm.alphabet, input);
    for (std::size_t k = 0; k < syms.size(); ++k) tape[static_cast<long>(k) + 1] = tm.symbol_index(syms[k]);
    long right = static_cast<long>(syms.size()) + 1;
    if (tsv) std::cout << "step\tstate\tread\twrite\tmove\tc\tell\n";
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        const TMStep& st = tr.steps[i];
        std::string write = st.v ? tm.alphabet[*st.v] : "-";
        std::string move = st.v ? (st.m < 0 ? "L" : "R") : "-";
        std::string ell = i == 0 ? "-" : std::to_string(st.ell);
        if (tsv) {
            std::cout << i << "\t" << tm.states[st.q] << "\t" << tm.alphabet[st.s] << "\t" << write << "\t" << move
                      << "\t" << st.c << "\t" << ell << "\n";
        } else {
            std::ostringstream row;
            right = std::max(right, st.c);
            for (long c = 0; c <= right; ++c) {
                auto it = tape.find(c);
                std::string sym = tm.alphabet[it == tape.end() ? tm.blank : it->second];
                row << (c == st.c ? "[" + sym + "]" : " " + sym + " ");
            }
            std::cout << i << "\t" << tm.states[st.q] << "\t" << tm.alphabet[st.s] << " -> " << write << " " << move
                      << "\tc=" << st.c << "\tl=" << ell << "\t|" << row.str() << "|\n";
        }
        if (st.v) tape[st.c] = *st.v;
    }
    if (tr.accept_time) std::cout << (tsv ? "# " : "") << "accepted at step " << *tr.accept_time << "\n";
    else std::cout << (tsv ? "# " : "") << "not accepted within " << steps << " steps\n";
    return 0;
}

int cmd_normalize(const std::string& in, const std::string& out) {
    TuringMachine tm = normalize_tm(parse_general_tm_spec(read_file(in)));
    write_output(out, serialize_tm(tm));
    return 0;
}

int cmd_propinv(const std::string& word, const std::string& net, std::size_t max_len, std::size_t count,
                std::uint64_t seed, std::size_t steps) {
    Recognizer rec = net.empty() ? majority_recognizer() : parse_recognizer(read_file(net));
    auto w = tokenize(rec.alphabet, word);
    if (w.empty()) throw ParseError("--word must contain at least one symbol");
    if (!rec.posenc.is_zero())
        std::cout << "warning: the network has a positional encoding, so agreement is not guaranteed\n";
    auto members = propinv_samples(w, std::max(max_len, w.size()), count, seed);
    auto join = [](const std::vector<std::string>& u) {
        std::string s;
        for (const auto& t : u) s += t;
        return s;
    };
    const auto base = run_recognizer(word, rec, steps);
    std::size_t differ = 0;
    for (const auto& u : members) {
        bool same = run_recognizer(join(u), rec, steps) == base;
        if (!same) ++differ;
        std::cout << join(u) << "\t" << (same ? "agree" : "differ") << "\n";
    }
    std::cout << members.size() << " members of PropInv(" << word << "), " << differ << " disagree\n";
    if (differ) throw CheckFailed{};
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compile Turing machines and RNNs into exact hard-attention Transformers and Neural GPUs"};
    app.require_subcommand(1);

    std::string in, out, input, net, inputs_path, corrupt, word;
    std::size_t steps = 0, count = 20, max_len_value = 0;
    std::uint64_t seed = 0;
    bool layout = false, trace = false, tsv = false, ngpu = false;

    auto* c_tm = app.add_subcommand("compile-tm", "Compile a machine file into a Transformer network");
    c_tm->add_option("machine", in, "machine file (JSON)")->required();
    c_tm->add_option("-o,--output", out, "network file (stdout when omitted)");
    c_tm->add_flag("--layout", layout, "print the slot table");

    auto* c_rnn = app.add_subcommand("compile-rnn", "Compile an rnn file into a Transformer network");
    c_rnn->add_option("rnn", in, "rnn file (JSON)")->required();
    c_rnn->add_option("-o,--output", out, "network file (stdout when omitted)");
    c_rnn->add_flag("--layout", layout, "print the slot table");

    auto* c_ngpu = app.add_subcommand("compile-ngpu", "Compile an rnn file into a uniform Neural GPU");
    c_ngpu->add_option("rnn", in, "rnn file (JSON)")->required();
    c_ngpu->add_option("-o,--output", out, "network file (stdout when omitted)");

    auto* run = app.add_subcommand("run", "Run a compiled network on a word");
    run->add_option("net", net, "network file")->required();
    run->add_option("--input", input, "input word")->required();
    run->add_option("--steps", steps, "decoder steps")->required();
    auto* f_trace = run->add_flag("--trace", trace, "one line per step with named slots");
    run->add_flag("--tsv", tsv, "tab-separated values, one row per step")->excludes(f_trace);

    auto* verify = app.add_subcommand("verify", "Check a compiled network against its reference");
    verify->add_option("file", in, "machine or rnn file")->required();
    auto* o_inputs = verify->add_option("--inputs", inputs_path, "file with one word per line");
    auto* o_maxlen = verify->add_option("--max-len", max_len_value, "check every word up to this length");
    o_inputs->excludes(o_maxlen);
    verify->add_option("--steps", steps, "decoder steps")->required();
    verify->add_option("--net", net, "network file to check instead of compiling the input");
    verify->add_option("--corrupt", corrupt, "redirect the rule state:symbol (fault injection)");
    verify->add_flag("--ngpu", ngpu, "check the Neural GPU compiled from an rnn file");

    auto* tr = app.add_subcommand("trace", "Print the reference trace of a machine");
    tr->add_option("machine", in, "machine file")->required();
    tr->add_option("--input", input, "input word");
    tr->add_option("--steps", steps, "maximum steps")->required();
    tr->add_flag("--tsv", tsv, "tab-separated values");

    auto* norm = app.add_subcommand("normalize", "Convert a general machine into compiler form");
    norm->add_option("machine", in, "machine file")->required();
    norm->add_option("-o,--output", out, "output file (stdout when omitted)");

    auto* prop = app.add_subcommand("propinv", "Compare outputs across PropInv(w)");
    prop->add_option("--word", word, "base word")->required();
    prop->add_option("--net", net, "network file (the majority network when omitted)");
    prop->add_option("--max-len", max_len_value, "longest member")->default_val(12);
    prop->add_option("--count", count, "members to check (0 for all)")->default_val(20);
    prop->add_option("--seed", seed, "sampling seed")->default_val(0);
    prop->add_option("--steps", steps, "decoder steps")->default_val(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_tm->parsed()) return cmd_compile_tm(in, out, layout);
        if (c_rnn->parsed()) return cmd_compile_rnn(in, out, layout);
        if (c_ngpu->parsed()) return cmd_compile_ngpu(in, out);
        if (run->parsed()) return cmd_run(net, input, steps, trace, tsv);
        if (verify->parsed()) {
            if (inputs_path.empty() && o_maxlen->count() == 0) {
                std::cerr << "verify: give --inputs or --max-len\n";
                return 2;
            }
            std::optional<std::size_t> max_len;
            if (o_maxlen->count()) max_len = max_len_value;
            return cmd_verify(in, inputs_path, max_len, steps, net, corrupt, ngpu);
        }
        if (tr->parsed()) return cmd_trace(in, input, steps, tsv);
        if (norm->parsed()) return cmd_normalize(in, out);
        if (prop->parsed()) return cmd_propinv(word, net, max_len_value, count, seed, steps);
    } catch (const CheckFailed&) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
