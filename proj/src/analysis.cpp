#include "turingnet/analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace turingnet {

bool same_proportions(const std::vector<std::string>& u, const std::vector<std::string>& w) {
    if (u.empty() || w.empty()) return u.empty() && w.empty();
    std::map<std::string, long> cu, cw;
    for (const auto& s : u) ++cu[s];
    for (const auto& s : w) ++cw[s];
    if (cu.size() != cw.size()) return false;
    for (const auto& [s, k] : cw) {
        auto it = cu.find(s);
        if (it == cu.end() || Rat(it->second, static_cast<long>(u.size())) != Rat(k, static_cast<long>(w.size())))
            return false;
    }
    return true;
}

namespace {

/// Number of distinct rearrangements, saturating just above `cap`.
std::size_t multinomial(const std::vector<std::size_t>& counts, std::size_t cap) {
    // Product of binomials C(n_1 + … + n_k, n_k), each computed exactly
    // while it stays small.
    std::size_t total = 0, result = 1;
    for (std::size_t c : counts) {
        for (std::size_t j = 1; j <= c; ++j) {
            ++total;
            // result *= total / j, kept integral by multiplying first.
            unsigned __int128 r = static_cast<unsigned __int128>(result) * total / j;
            if (r > cap) return cap + 1;
            result = static_cast<std::size_t>(r);
        }
    }
    return result;
}

}  // namespace

std::vector<std::vector<std::string>> propinv_samples(const std::vector<std::string>& w, std::size_t max_len,
                                                      std::size_t count, std::uint64_t seed) {
    if (w.empty()) throw std::invalid_argument("propinv_samples needs a non-empty word");
    std::map<std::string, std::size_t> counts;
    for (const auto& s : w) ++counts[s];
    std::size_t g = 0;
    for (const auto& [s, c] : counts) g = std::gcd(g, c);
    const std::size_t base = w.size() / g;

    std::vector<std::vector<std::string>> out{w};
    std::set<std::vector<std::string>> seen{w};
    auto add = [&](const std::vector<std::string>& u) {
        if (seen.insert(u).second) out.push_back(u);
    };
    // Repetitions first so that they survive a small `count`.
    for (std::size_t k = 2; k * w.size() <= max_len; ++k) {
        std::vector<std::string> u;
        for (std::size_t r = 0; r < k; ++r) u.insert(u.end(), w.begin(), w.end());
        add(u);
    }
    const std::size_t fixed = out.size();
    std::mt19937_64 rng(seed);
    for (std::size_t k = 1; k * base <= max_len; ++k) {
        std::vector<std::string> u;
        std::vector<std::size_t> scaled;
        for (const auto& [s, c] : counts) {
            scaled.push_back(c / g * k);
            u.insert(u.end(), c / g * k, s);
        }
        if (multinomial(scaled, kPropInvBudget) <= kPropInvBudget) {
            std::sort(u.begin(), u.end());
            do add(u);
            while (std::next_permutation(u.begin(), u.end()));
        } else {
            for (std::size_t i = 0; i < kPropInvBudget; ++i) {
                std::shuffle(u.begin(), u.end(), rng);
                add(u);
            }
        }
    }
    if (count > 0 && out.size() > count) {
        // Keep w and the repetitions, sample the rest deterministically.
        const std::size_t keep = std::min(fixed, count);
        std::vector<std::vector<std::string>> rest(out.begin() + keep, out.end());
        std::shuffle(rest.begin(), rest.end(), rng);
        out.resize(keep);
        for (std::size_t i = 0; out.size() < count; ++i) out.push_back(rest[i]);
    }
    return out;
}

std::vector<std::string> propinv_samples(const std::string& w, std::size_t max_len, std::size_t count,
                                         std::uint64_t seed) {
    std::vector<std::string> toks;
    for (char c : w) toks.emplace_back(1, c);
    std::vector<std::string> out;
    for (const auto& u : propinv_samples(toks, max_len, count, seed)) {
        std::string s;
        for (const auto& t : u) s += t;
        out.push_back(s);
    }
    return out;
}

Recognizer majority_recognizer() {
    Recognizer rec;
    rec.alphabet = {"a", "b"};
    rec.embed["a"] = RatVec{0, 1};
    rec.embed["b"] = RatVec{0, -1};
    rec.params.dim = 2;
    rec.params.enc_layers = {EncLayerParams{FeedForward::zero(2, 2), FeedForward::zero(2, 2),
                                            FeedForward::zero(2, 2), FeedForward::zero(2, 2),
                                            ScoreFn::mult_phi()}};
    rec.params.final_K = FeedForward::zero(2, 2);
    rec.params.final_V = FeedForward::identity();
    // O([x, y]) = [y − x, −y].
    rec.params.dec_layers = {DecLayerParams{FeedForward::zero(2, 2), FeedForward::zero(2, 2),
                                            FeedForward::zero(2, 2),
                                            FeedForward::linear(RatMat{{-1, 0}, {1, -1}}), ScoreFn::mult_phi(),
                                            ScoreFn::mult_phi()}};
    rec.params.final_F = FeedForward::identity();
    rec.params.validate();
    rec.seed = RatVec(2);
    rec.final_pred.clauses = {Clause::greater_than(0, 0)};
    rec.slot_names = {"c", "y"};
    return rec;
}

}  // namespace turingnet
