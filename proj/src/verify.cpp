#include "turingnet/verify.hpp"

#include <sstream>

#include "turingnet/neural_gpu.hpp"

namespace turingnet {

std::string Divergence::str() const {
    std::ostringstream os;
    os << "input \"" << input << "\" step " << step << " (" << stage << "): slot " << slot << " in " << block
       << " expected " << expected << ", got " << got;
    return os.str();
}

std::string VerifyReport::str() const {
    std::ostringstream os;
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    if (pass) {
        os << "PASS (" << runs << " inputs, " << positions << " decoder positions)\n";
    } else {
        os << "FAIL ";
        if (divergence) os << divergence->str() << "\n";
        else os << failure.value_or("unknown failure") << "\n";
    }
    return os.str();
}

namespace {

/// Records the first coordinate where `got` differs from `want`.
template <class Name>
bool compare(VerifyReport& rep, const std::string& input, std::size_t step, const std::string& stage,
             const RatVec& want, const RatVec& got, Name name) {
    if (want.size() != got.size()) {
        rep.pass = false;
        rep.failure = stage + " has dimension " + std::to_string(got.size()) + ", expected " +
                      std::to_string(want.size());
        return false;
    }
    for (std::size_t k = 0; k < want.size(); ++k) {
        if (want[k] == got[k]) continue;
        rep.pass = false;
        auto [slot, block] = name(k);
        rep.divergence = Divergence{input, step, stage, slot, block, want[k], got[k]};
        return false;
    }
    return true;
}

bool fail(VerifyReport& rep, const std::string& msg) {
    rep.pass = false;
    rep.failure = msg;
    return false;
}

/// Each σ input must be an integer (σ thresholds it) or lie in [0,1] (σ
/// passes it through); anything else would be clamped to a fractional value.
bool sigma_inputs_sound(VerifyReport& rep, const FeedForward& f, const RatVec& x, const std::string& where) {
    auto trace = ffn_trace(f, x);
    for (std::size_t s = 0; s < trace.size(); ++s) {
        if (f.stages()[s].act != Activation::Sigma) continue;
        for (std::size_t k = 0; k < trace[s].pre.size(); ++k)
            if (const Rat& v = trace[s].pre[k]; !v.is_integer() && (v < 0 || v > 1))
                return fail(rep, where + ": σ stage " + std::to_string(s) + " input " + std::to_string(k) + " is " +
                                     trace[s].pre[k].str() + ", neither an integer nor in [0,1]");
    }
    return true;
}

RatVec tm_group4(RatVec z, const TMLayout& L, std::size_t i) {
    Rat p(static_cast<long>(i + 1));
    z[L.x8] = 1;
    z[L.x9] = p;
    z[L.x10] = Rat(1) / p;
    z[L.x11] = Rat(1) / (p * p);
    return z;
}

void put_one_hot(RatVec& z, std::size_t begin, std::size_t k) { z[begin + k] = 1; }

}  // namespace

std::vector<std::size_t> tm_encoder_symbols(const TuringMachine& tm, const std::string& w) {
    std::vector<std::size_t> out;
    for (const auto& s : tokenize(tm.alphabet, w)) out.push_back(tm.symbol_index(s));
    if (out.empty()) out.push_back(tm.blank);
    return out;
}

RatVec expected_tm_layer1(const TuringMachine& tm, const TMTrace& tr, const std::vector<std::size_t>& enc,
                          std::size_t i) {
    TMLayout L(tm);
    const TMStep& st = tr.steps.at(i);
    const std::size_t next_q = tm.rule(st.q, st.s)->next;
    RatVec z(L.dim);
    put_one_hot(z, L.q2, next_q);
    put_one_hot(z, L.s2, *st.v);
    z[L.x2] = st.m;
    z[L.x3] = tr.m_before(i);
    const std::size_t j = std::min(i + 1, enc.size());
    put_one_hot(z, L.s3, enc[j - 1]);
    z[L.x6] = Rat(static_cast<long>(j));
    return tm_group4(std::move(z), L, i);
}

RatVec expected_tm_layer2(const TuringMachine& tm, const TMTrace& tr, const std::vector<std::size_t>& enc,
                          std::size_t i) {
    TMLayout L(tm);
    RatVec z = expected_tm_layer1(tm, tr, enc, i);
    long c_next = tr.steps.at(i).c + tr.steps.at(i).m;
    Rat p(static_cast<long>(i + 1));
    z[L.x4] = Rat(c_next) / p;
    z[L.x5] = Rat(tr.steps.at(i).c) / p;
    return z;
}

RatVec expected_tm_layer3(const TuringMachine& tm, const TMTrace& tr, const std::vector<std::size_t>& enc,
                          std::size_t i) {
    TMLayout L(tm);
    RatVec z = expected_tm_layer2(tm, tr, enc, i);
    long ell = tr.steps.at(i + 1).ell;
    put_one_hot(z, L.s4, *tr.steps.at(static_cast<std::size_t>(ell)).v);
    z[L.x7] = Rat(ell);
    return z;
}

VerifyReport verify_tm(const TuringMachine& tm, const Recognizer& rec, const std::vector<std::string>& inputs,
                       std::size_t steps) {
    VerifyReport rep;
    if (steps == 0) {
        rep.warnings.push_back("steps = 0: nothing to compare");
        return rep;
    }
    TMLayout L(tm);
    if (rec.params.dim != L.dim) {
        fail(rep, "network dimension " + std::to_string(rec.params.dim) + " does not match the machine layout " +
                      std::to_string(L.dim));
        return rep;
    }
    if (rec.params.dec_layers.size() != 3) {
        fail(rep, "expected 3 decoder layers");
        return rep;
    }
    auto names = [&](std::size_t k) { return std::pair{L.slot_name(tm, k), L.block_name(k)}; };
    for (const auto& w : inputs) {
        TMTrace tr;
        try {
            tr = tm_trace(tm, w, steps);
        } catch (const NormalizationError& e) {
            fail(rep, "input \"" + w + "\": " + e.what());
            return rep;
        }
        const auto enc = tm_encoder_symbols(tm, w);
        if (!compare(rep, w, 0, "seed", expected_tm_output(tm, tr, 0), rec.seed, names)) return rep;
        Decoder dec(rec.params, run_tenc(embed_word(rec, w), rec.params));
        RatVec y = rec.seed;
        const std::size_t T = tr.steps.size() - 1;
        for (std::size_t i = 0; i < T; ++i) {
            DecoderStep st = dec.push(y + rec.posenc.at(L.dim, i + 1));
            const std::string at = "input \"" + w + "\" step " + std::to_string(i);
            for (std::size_t l = 0; l < 3; ++l)
                if (!sigma_inputs_sound(rep, rec.params.dec_layers[l].O, st.layers[l].a,
                                           at + " layer " + std::to_string(l + 1)))
                    return rep;
            if (!sigma_inputs_sound(rep, rec.params.final_F, st.layers[2].z, at + " output"))
                return rep;
            if (!compare(rep, w, i, "layer 1", expected_tm_layer1(tm, tr, enc, i), st.layers[0].z, names))
                return rep;
            for (const auto& wt : st.layers[1].self_weights)
                if (wt != st.layers[1].self_weights[0]) {
                    fail(rep, at + ": layer 2 self-attention scores do not all tie");
                    return rep;
                }
            if (!compare(rep, w, i, "layer 2", expected_tm_layer2(tm, tr, enc, i), st.layers[1].z, names))
                return rep;
            const long ell = tr.steps[i + 1].ell;
            if (st.layers[2].self_weights.at(static_cast<std::size_t>(ell)) != 1) {
                fail(rep, at + ": layer 3 does not attend to position " + std::to_string(ell) + " alone");
                return rep;
            }
            if (!compare(rep, w, i, "layer 3", expected_tm_layer3(tm, tr, enc, i), st.layers[2].z, names))
                return rep;
            if (!compare(rep, w, i, "output", expected_tm_output(tm, tr, i + 1), st.output, names)) return rep;
            y = st.output;
            ++rep.positions;
        }
        const bool net_accepts = rec.final_pred(y);
        if (net_accepts != tr.accept_time.has_value()) {
            fail(rep, "input \"" + w + "\": acceptance differs after " + std::to_string(T) + " steps");
            return rep;
        }
        ++rep.runs;
    }
    return rep;
}

RatVec expected_rnn_layer1(const RnnLayout& L, const RefSequences& s, std::size_t i) {
    RatVec z(L.dim);
    for (std::size_t k = 0; k < L.d; ++k) {
        z[L.B1 + k] = s.alpha.at(i + 1)[k];
        z[L.B2 + k] = s.beta.at(i)[k];
        z[L.B3 + k] = s.gamma.at(i)[k];
        z[L.B4 + k] = s.beta.at(i + 1)[k];
        z[L.B5 + k] = s.gamma.at(i + 1)[k];
    }
    z[L.a] = s.a.at(i);
    z[L.b] = s.b.at(i);
    z[L.c] = s.c.at(i);
    z[L.cc] = s.c.at(i + 1);
    z[L.a2] = s.a.at(i + 1);
    z[L.b2] = s.b.at(i + 1);
    z[L.pos] = Rat(static_cast<long>(i + 1));
    return z;
}

namespace {

std::vector<RatVec> embed_rnn_word(const RnnSpec& spec, const std::string& w) {
    std::vector<RatVec> X;
    for (const auto& s : tokenize(spec.alphabet, w)) X.push_back(spec.embed.at(s));
    return X;
}

}  // namespace

VerifyReport verify_rnn(const RnnSpec& spec, const Recognizer& rec, const std::vector<std::string>& inputs,
                        std::size_t steps) {
    VerifyReport rep;
    if (steps == 0) {
        rep.warnings.push_back("steps = 0: nothing to compare");
        return rep;
    }
    RnnLayout L(spec.rnn.d);
    if (rec.params.dim != L.dim || rec.params.dec_layers.size() != 2) {
        fail(rep, "network shape does not match the rnn layout");
        return rep;
    }
    auto names = [&](std::size_t k) { return std::pair{L.slot_name(k), L.block_name(k)}; };
    for (const auto& w : inputs) {
        std::vector<RatVec> X = embed_rnn_word(spec, w);
        if (X.empty()) {
            rep.warnings.push_back("skipping the empty word: the encoder needs at least one symbol");
            continue;
        }
        const std::size_t n = X.size();
        RefSequences seq = reference_sequences(spec.rnn, X, steps + 1);
        RnnRun run = rnn_run(spec.rnn, X, steps);
        if (!compare(rep, w, 0, "seed", expected_rnn_output(L, seq, 0), rec.seed, names)) return rep;
        Decoder dec(rec.params, run_tenc(embed_word(rec, w), rec.params));
        RatVec y = rec.seed;
        for (std::size_t i = 0; i < steps; ++i) {
            DecoderStep st = dec.push(y + rec.posenc.at(L.dim, i + 1));
            if (!compare(rep, w, i, "layer 1", expected_rnn_layer1(L, seq, i), st.layers[0].z, names)) return rep;
            if (!compare(rep, w, i, "output", expected_rnn_output(L, seq, i + 1), st.output, names)) return rep;
            for (std::size_t k = L.B2; k < L.B3 + L.d; ++k)
                if (st.output[k] < 0 || st.output[k] > 1) {
                    fail(rep, "input \"" + w + "\" step " + std::to_string(i) + ": " + L.slot_name(k) +
                                  " = " + st.output[k].str() + " leaves [0,1]");
                    return rep;
                }
            if (i + 1 >= n + 1) {
                RatVec g = run.g.at(i - n);
                RatVec got = st.output.slice(L.B3, L.d);
                if (!compare(rep, w, i, "decoder state g_" + std::to_string(i - n), g, got,
                             [&](std::size_t k) { return names(L.B3 + k); }))
                    return rep;
            }
            y = st.output;
            ++rep.positions;
        }
        ++rep.runs;
    }
    return rep;
}

VerifyReport verify_ngpu(const RnnSpec& spec, const std::vector<std::string>& inputs, std::size_t steps) {
    VerifyReport rep;
    if (steps == 0) {
        rep.warnings.push_back("steps = 0: nothing to compare");
        return rep;
    }
    const std::size_t d = spec.rnn.d;
    CompiledNGPU net = compile_rnn_to_ngpu(spec.rnn);
    auto names = [&](std::size_t k) {
        static const char* blocks[] = {"E", "D", "G"};
        if (k < 3 * d)
            return std::pair{std::string(blocks[k / d]) + "[" + std::to_string(k % d) + "]",
                             std::string(blocks[k / d]) + " block"};
        std::string g = "gadget[" + std::to_string(k - 3 * d) + "]";
        return std::pair{g, std::string("gadget block")};
    };
    for (const auto& w : inputs) {
        std::vector<RatVec> X = embed_rnn_word(spec, w);
        if (X.empty()) {
            rep.warnings.push_back("skipping the empty word: the Neural GPU needs at least one row");
            continue;
        }
        const std::size_t n = X.size();
        RnnRun run = rnn_run(spec.rnn, X, steps);
        Tensor3 S = ngpu_input(net.lift(X), net.params);
        for (std::size_t t = 0; t <= steps; ++t) {
            if (t > 0) {
                try {
                    S = ngpu_step(S, net.params);
                } catch (const std::domain_error& e) {
                    fail(rep, "input \"" + w + "\" iteration " + std::to_string(t) + ": " + e.what());
                    return rep;
                }
                ++rep.positions;
            }
            for (std::size_t i = 1; i <= n; ++i)
                if (!compare(rep, w, t, "row " + std::to_string(i), ngpu_expected_row(spec.rnn, X, i, t),
                             S.cell(i - 1, 0), names))
                    return rep;
            if (t > n) {
                RatVec want(3 * d + 3);
                for (std::size_t k = 0; k < d; ++k) want[2 * d + k] = run.g.at(t - n)[k];
                if (!compare(rep, w, t, "output cell g_" + std::to_string(t - n), want, S.cell(n - 1, 0), names))
                    return rep;
            }
        }
        ++rep.runs;
    }
    return rep;
}

}  // namespace turingnet
