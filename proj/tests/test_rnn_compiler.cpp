#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "turingnet/rnn_compiler.hpp"
#include "turingnet/serialize.hpp"

using namespace turingnet;

namespace {

RatVec sigma_row(const RatVec& x) {
    RatVec y = x;
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = std::clamp(y[k], Rat(0), Rat(1));
    return y;
}

RnnEncDec random_rnn(std::mt19937& rng, std::size_t d) {
    const Rat vals[] = {Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1)};
    RnnEncDec r;
    r.d = d;
    for (RatMat* m : {&r.W, &r.V, &r.U}) {
        *m = RatMat(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) (*m)(i, j) = vals[rng() % 5];
    }
    return r;
}

}  // namespace

TEST_CASE("rnn reference run") {
    RnnEncDec r;
    r.d = 1;
    r.W = RatMat{{Rat(1, 2)}};
    r.V = RatMat{{1}};
    r.U = RatMat{{2}};
    auto run = rnn_run(r, {RatVec{1}, RatVec{1}, RatVec{1}}, 2);
    CHECK(run.h == std::vector<RatVec>{RatVec{0}, RatVec{Rat(1, 2)}, RatVec{1}, RatVec{1}});
    CHECK(run.g == std::vector<RatVec>{RatVec{1}, RatVec{1}, RatVec{1}});
}

TEST_CASE("layout") {
    RnnLayout L(3);
    CHECK(L.dim == 6 * 3 + 8);
    CHECK(L.B2 == 3);
    CHECK(L.a == 9);
    CHECK(L.cc == 12);
    CHECK(L.B4 == 13);
    CHECK(L.pos == L.dim - 1);
    CHECK(L.slot_name(L.B2 + 1) == "beta[1]");
    CHECK(L.slot_name(L.pos) == "pos");
    CHECK(L.block_name(L.B3) == "gamma block");
}

TEST_CASE("reference sequences follow their recursive definitions") {
    std::mt19937 rng(9);
    for (int k = 0; k < 20; ++k) {
        std::size_t d = 1 + rng() % 3, n = 1 + rng() % 4, r = n + 5;
        RnnEncDec rnn = random_rnn(rng, d);
        std::vector<RatVec> X(n, RatVec(d));
        for (auto& x : X)
            for (std::size_t j = 0; j < d; ++j) x[j] = Rat(long(rng() % 3), 2);
        RefSequences seq = reference_sequences(rnn, X, r);
        // h_i for i ≤ n, then g_t at i = n + 1 + t in the γ block.
        RatVec h(d);
        for (std::size_t i = 1; i <= n; ++i) {
            h = sigma_row(X[i - 1] * rnn.W + h * rnn.V);
            CHECK(seq.beta[i] == h);
        }
        RatVec g = h;
        for (std::size_t t = 0; n + 1 + t <= r; ++t) {
            CHECK(seq.gamma[n + 1 + t] == g);
            g = sigma_row(g * rnn.U);
        }
        for (std::size_t i = 0; i <= r; ++i) {
            CHECK(seq.a[i] == Rat(i >= n + 1 ? 1 : 0));
            CHECK(seq.b[i] == Rat(i == n + 1 ? 0 : 1));
            CHECK(seq.c[i] == Rat(long(std::min(i, n))));
        }
    }
}

TEST_CASE("compiled network reproduces the reference blocks") {
    std::mt19937 rng(4);
    for (int k = 0; k < 15; ++k) {
        std::size_t d = 1 + rng() % 3, n = 1 + rng() % 5, r = n + 7;
        RnnSpec spec;
        spec.rnn = random_rnn(rng, d);
        Recognizer rec = compile_rnn(spec);
        CHECK(rec.params.dim == 6 * d + 8);
        RnnLayout L(d);
        std::vector<RatVec> X(n, RatVec(d));
        for (auto& x : X)
            for (std::size_t j = 0; j < d; ++j) x[j] = Rat(long(rng() % 3), 2);
        auto ys = run_trans(rnn_encoder_input(L, X), rec.seed, r, rec);
        RefSequences seq = reference_sequences(spec.rnn, X, r);
        for (std::size_t i = 1; i <= r; ++i) CHECK(ys[i - 1] == expected_rnn_output(L, seq, i));
    }
}

TEST_CASE("recognizer accepts through the decoder block") {
    RnnSpec spec = parse_rnn_spec(read_file(FIXTURE_DIR "/b_then_a.json"));
    Recognizer rec = compile_rnn(spec);
    for (const auto& w : all_words(spec.alphabet, 5)) {
        if (w.empty()) continue;
        bool want = w.find('b') != std::string::npos && w.back() == 'a';
        auto d = recognizer_accepts(w, rec, w.size() + 4);
        CHECK(d.accepted == want);
        if (want) CHECK(d.step == w.size() + 1);
    }
}
