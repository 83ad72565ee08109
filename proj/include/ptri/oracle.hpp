#pragma once

/**
 * @file oracle.hpp
 * @brief Exact ground truth by exhaustive enumeration of outcome vectors.
 *
 * Nothing here calls the floating-point convolution or optimizer code. Every
 * distribution is obtained by walking all 3^n outcome vectors with a mixed-radix
 * counter and summing exact rational products.
 */

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptri/errors.hpp"
#include "ptri/exact.hpp"

namespace ptri::oracle {

inline constexpr std::size_t kMaxEnumerationTrials = 12;
inline constexpr std::size_t kMaxOrderingTrials = 7;

struct RationalTrial {
    Rational tie;
    Rational win;
    Rational loss;
};

/// Exact mirror of a TrinomialModel: components non-negative, summing to exactly 1.
class RationalModel {
public:
    static RationalModel make(std::vector<std::pair<Rational, Rational>> tie_win) {
        if (tie_win.empty()) throw ValidationError("a model needs at least one trial");
        RationalModel m;
        for (std::size_t i = 0; i < tie_win.size(); ++i) {
            auto& [t, w] = tie_win[i];
            Rational l = 1 - t - w;
            if (sgn(t) < 0 || sgn(w) < 0 || sgn(l) < 0)
                throw ValidationError("trials[" + std::to_string(i) + "]: not a probability triple");
            m.trials_.push_back({t, w, l});
        }
        return m;
    }

    std::size_t size() const noexcept { return trials_.size(); }
    const std::vector<RationalTrial>& trials() const noexcept { return trials_; }

private:
    std::vector<RationalTrial> trials_;
};

/// Exact P(2X = h), h = 0..2n.
struct ExactPMF {
    std::vector<Rational> probs;
};

inline ExactPMF enumerate_pmf(const RationalModel& model) {
    const std::size_t n = model.size();
    if (n > kMaxEnumerationTrials)
        throw SizeExceeded("exact enumeration is capped at " + std::to_string(kMaxEnumerationTrials) + " trials");
    const auto& trials = model.trials();
    auto prob_of = [&](std::size_t i, int outcome) -> const Rational& {
        return outcome == 0 ? trials[i].loss : outcome == 1 ? trials[i].tie : trials[i].win;
    };

    ExactPMF out{std::vector<Rational>(2 * n + 1, Rational(0))};
    // digits[i] in {0, 1, 2} is trial i's doubled score; the last digit runs fastest.
    std::vector<int> digits(n, 0);
    // prefix[i] = product of the first i chosen probabilities, prefix_score likewise.
    std::vector<Rational> prefix(n + 1, Rational(1));
    std::vector<std::size_t> prefix_score(n + 1, 0);
    std::size_t dirty = 0;
    while (true) {
        for (std::size_t i = dirty; i < n; ++i) {
            prefix[i + 1] = prefix[i] * prob_of(i, digits[i]);
            prefix_score[i + 1] = prefix_score[i] + static_cast<std::size_t>(digits[i]);
        }
        out.probs[prefix_score[n]] += prefix[n];

        std::size_t pos = n;
        while (pos > 0 && digits[pos - 1] == 2) digits[--pos] = 0;
        if (pos == 0) break;
        ++digits[pos - 1];
        dirty = pos - 1;
    }
    return out;
}

struct ExactMeans {
    Rational mu;
    std::optional<Rational> mu_even;
    std::optional<Rational> mu_odd;
};

inline ExactMeans conditional_means(const ExactPMF& pmf) {
    Rational total_even(0), total_odd(0), moment_even(0), moment_odd(0);
    for (std::size_t h = 0; h < pmf.probs.size(); ++h) {
        const Rational x = make_rational(static_cast<long>(h), 2);
        if (h % 2 == 0) {
            total_even += pmf.probs[h];
            moment_even += x * pmf.probs[h];
        } else {
            total_odd += pmf.probs[h];
            moment_odd += x * pmf.probs[h];
        }
    }
    ExactMeans m;
    m.mu = moment_even + moment_odd;
    if (sgn(total_even) != 0) m.mu_even = Rational(moment_even / total_even);
    if (sgn(total_odd) != 0) m.mu_odd = Rational(moment_odd / total_odd);
    return m;
}

inline ExactMeans oracle_conditional_means(const RationalModel& model) {
    return conditional_means(enumerate_pmf(model));
}

/// Exact P(2X >= k2).
inline Rational tail(const ExactPMF& pmf, std::size_t k2) {
    Rational sum(0);
    for (std::size_t h = k2; h < pmf.probs.size(); ++h) sum += pmf.probs[h];
    return sum;
}

inline Rational oracle_tail(const RationalModel& model, std::size_t k2) {
    if (k2 > 2 * model.size() + 1) throw ValidationError("k2 must lie in [0, 2n+1]");
    return tail(enumerate_pmf(model), k2);
}

/// Exact mirror of a matchup instance (linear model, both teams, doubled threshold).
struct RationalMatchup {
    Rational alpha;
    Rational beta;
    std::vector<Rational> team_a;
    std::vector<Rational> team_b;
    std::size_t k2 = 0;
};

/// Exact trials of the lineup in which B's player sigma[i] meets A's player i (0-based).
inline RationalModel lineup_model(const RationalMatchup& inst, const std::vector<std::size_t>& sigma) {
    std::vector<std::pair<Rational, Rational>> tw;
    tw.reserve(sigma.size());
    const Rational tie = 1 - 2 * inst.beta;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const Rational s = inst.team_b[sigma[i]] - inst.team_a[i];
        tw.emplace_back(tie, Rational(inst.alpha * s + inst.beta));
    }
    return RationalModel::make(std::move(tw));
}

/// Every ordering (lexicographic order) with its exact tails P(2X >= k2) for k2 = 0..2n+1.
struct OrderingTable {
    std::vector<std::vector<std::size_t>> orderings;
    std::vector<std::vector<Rational>> tails;
};

inline OrderingTable oracle_ordering_table(const RationalMatchup& inst) {
    const std::size_t n = inst.team_a.size();
    if (n > kMaxOrderingTrials)
        throw SizeExceeded("ordering brute force is capped at " + std::to_string(kMaxOrderingTrials) + " players");
    if (inst.team_b.size() != n) throw ValidationError("teams must have equal size");
    OrderingTable table;
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    do {
        const auto exact = enumerate_pmf(lineup_model(inst, sigma));
        std::vector<Rational> tails(2 * n + 2, Rational(0));
        for (std::size_t k2 = 2 * n + 1; k2-- > 0;) tails[k2] = tails[k2 + 1] + exact.probs[k2];
        table.orderings.push_back(sigma);
        table.tails.push_back(std::move(tails));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return table;
}

/// Indices into the table of every ordering attaining the exact maximum at k2.
inline std::vector<std::size_t> argmax_at(const OrderingTable& table, std::size_t k2) {
    std::vector<std::size_t> best;
    const Rational* top = nullptr;
    for (std::size_t i = 0; i < table.tails.size(); ++i) {
        const Rational& v = table.tails[i][k2];
        if (!top || v > *top) {
            top = &v;
            best.assign(1, i);
        } else if (v == *top) {
            best.push_back(i);
        }
    }
    return best;
}

/// All orderings maximizing the exact tail at inst.k2 (no tolerance).
inline std::vector<std::vector<std::size_t>> oracle_ordering_optimum(const RationalMatchup& inst) {
    if (inst.k2 > 2 * inst.team_a.size()) throw ValidationError("k2 must lie in [0, 2n]");
    const auto table = oracle_ordering_table(inst);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i : argmax_at(table, inst.k2)) out.push_back(table.orderings[i]);
    return out;
}

}  // namespace ptri::oracle
