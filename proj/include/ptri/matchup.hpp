#pragma once

/**
 * @file matchup.hpp
 * @brief Team match play under a linear win/tie/loss model.
 *
 * Team A's players (strengths a_1 >= ... >= a_n) are fixed in match order.
 * An ordering sigma sends B's player sigma[i] against A's player i. With
 * s = b - a the differential from B's side, B wins with alpha s + beta, loses
 * with -alpha s + beta and ties with 1 - 2 beta. Orderings are 0-based
 * internally; the JSON layer converts to 1-based player numbers.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ptri/distribution.hpp"
#include "ptri/errors.hpp"

namespace ptri {

class LinearModel {
public:
    LinearModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
        if (!(beta > 0.0 && beta <= 0.5)) throw ValidationError("beta must lie in (0, 1/2]");
    }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double tie() const noexcept { return 1.0 - 2.0 * beta_; }
    bool has_ties() const noexcept { return beta_ < 0.5; }

    /// Open interval of admissible differentials: (-beta/alpha, beta/alpha) ∩ ((beta-1)/alpha, (1-beta)/alpha).
    std::pair<double, double> valid_range() const noexcept {
        const double r = std::min(beta_, 1.0 - beta_) / alpha_;
        return {-r, r};
    }

private:
    double alpha_;
    double beta_;
};

/// Strengths in match order, sorted non-increasing (ties allowed).
class Team {
public:
    explicit Team(std::vector<double> strengths) : strengths_(std::move(strengths)) {
        for (std::size_t i = 0; i < strengths_.size(); ++i) {
            if (!std::isfinite(strengths_[i])) throw ValidationError("strength " + std::to_string(i + 1) + " is not finite");
            if (i > 0 && strengths_[i] > strengths_[i - 1])
                throw ValidationError("strengths must be sorted non-increasing (position " + std::to_string(i + 1) + ")");
        }
    }

    std::size_t size() const noexcept { return strengths_.size(); }
    double operator[](std::size_t i) const { return strengths_[i]; }
    std::span<const double> strengths() const noexcept { return strengths_; }

private:
    std::vector<double> strengths_;
};

using Ordering = std::vector<std::size_t>;

inline Ordering identity_ordering(std::size_t n) {
    Ordering s(n);
    std::iota(s.begin(), s.end(), std::size_t{0});
    return s;
}

inline Ordering reversal_ordering(std::size_t n) {
    Ordering s = identity_ordering(n);
    std::reverse(s.begin(), s.end());
    return s;
}

inline void validate_ordering(const Ordering& sigma, std::size_t n) {
    if (sigma.size() != n) throw ValidationError("ordering has the wrong length");
    std::vector<bool> seen(n, false);
    for (std::size_t v : sigma) {
        if (v >= n || seen[v]) throw ValidationError("ordering is not a permutation");
        seen[v] = true;
    }
}

inline std::string format_strength(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// B-perspective trial for a B player of strength b against an A player of strength a.
inline TrialParams trial_from_strengths(const LinearModel& model, double a, double b) {
    const double s = b - a;
    const double win = model.alpha() * s + model.beta();
    const double loss = -model.alpha() * s + model.beta();
    if (!(win >= 0.0 && win <= 1.0 && loss >= 0.0 && loss <= 1.0))
        throw DomainViolation("strength pair (a=" + format_strength(a) + ", b=" + format_strength(b) +
                              ", s=" + format_strength(s) + ") leaves the linear model's range");
    return TrialParams::make(model.tie(), win);
}

class MatchupInstance {
public:
    MatchupInstance(Team team_a, Team team_b, LinearModel model, std::size_t k2)
        : team_a_(std::move(team_a)), team_b_(std::move(team_b)), model_(model), k2_(k2) {
        const std::size_t n = team_a_.size();
        if (n == 0) throw ValidationError("teams must not be empty");
        if (team_b_.size() != n) throw ValidationError("teams must have equal size");
        if (k2 > 2 * n) throw ValidationError("threshold k must lie in {0, 0.5, ..., n}");
        const auto [lo, hi] = model_.valid_range();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double s = team_b_[j] - team_a_[i];
                if (!(s > lo && s < hi))
                    throw DomainViolation("strength pair (a" + std::to_string(i + 1) + "=" + format_strength(team_a_[i]) +
                                          ", b" + std::to_string(j + 1) + "=" + format_strength(team_b_[j]) +
                                          ") has differential " + format_strength(s) + " outside (" +
                                          format_strength(lo) + ", " + format_strength(hi) + ")");
            }
        }
    }

    std::size_t size() const noexcept { return team_a_.size(); }
    const Team& team_a() const noexcept { return team_a_; }
    const Team& team_b() const noexcept { return team_b_; }
    const LinearModel& model() const noexcept { return model_; }
    std::size_t k2() const noexcept { return k2_; }
    double k() const noexcept { return 0.5 * static_cast<double>(k2_); }

    MatchupInstance with_k2(std::size_t k2) const {
        MatchupInstance copy = *this;
        if (k2 > 2 * size()) throw ValidationError("threshold k must lie in {0, 0.5, ..., n}");
        copy.k2_ = k2;
        return copy;
    }

private:
    Team team_a_;
    Team team_b_;
    LinearModel model_;
    std::size_t k2_;
};

namespace detail {

inline std::vector<TrialParams> lineup_trials(const MatchupInstance& inst, const Ordering& sigma) {
    validate_ordering(sigma, inst.size());
    std::vector<TrialParams> trials;
    trials.reserve(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        trials.push_back(trial_from_strengths(inst.model(), inst.team_a()[i], inst.team_b()[sigma[i]]));
    return trials;
}

// Summed from the top so the result is monotone in k2; the whole mass is reported as exactly 1.
inline double tail_from(std::span<const double> probs, std::size_t k2) {
    if (k2 == 0) return 1.0;
    double sum = 0.0;
    for (std::size_t h = probs.size(); h-- > k2;) sum += probs[h];
    return std::min(sum, 1.0);
}

}  // namespace detail

inline TrinomialModel build_distribution(const MatchupInstance& inst, const Ordering& sigma) {
    return TrinomialModel(detail::lineup_trials(inst, sigma));
}

/// n/2 + alpha (sum b - sum a); the same for every ordering.
inline double expected_score(const MatchupInstance& inst) {
    const auto a = inst.team_a().strengths();
    const auto b = inst.team_b().strengths();
    const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
    const double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
    return 0.5 * static_cast<double>(inst.size()) + inst.model().alpha() * sum_b - inst.model().alpha() * sum_a;
}

/// P(X_sigma >= k).
inline double tail_probability(const MatchupInstance& inst, const Ordering& sigma) {
    return detail::tail_from(pmf(build_distribution(inst, sigma)).probs, inst.k2());
}

/// sigma with the opponents of matches i and j exchanged.
inline Ordering swapped(Ordering sigma, std::size_t i, std::size_t j) {
    std::swap(sigma.at(i), sigma.at(j));
    return sigma;
}

/// Change in each two-match score probability at 0 and 2 points when matches i < j exchange opponents:
/// -alpha^2 (a_i - a_j)(b_sigma(i) - b_sigma(j)).
inline double swap_delta(const MatchupInstance& inst, const Ordering& sigma, std::size_t i, std::size_t j) {
    if (!(i < j && j < inst.size())) throw ValidationError("swap_delta needs match indices i < j < n");
    const double alpha = inst.model().alpha();
    return -alpha * alpha * (inst.team_a()[i] - inst.team_a()[j]) *
           (inst.team_b()[sigma[i]] - inst.team_b()[sigma[j]]);
}

/// f(Y, k) = (P(Y = k-2) - P(Y = k-1)) + (P(Y = k-1.5) - P(Y = k-0.5)),
/// Y being the score from every match except i and j.
inline double residual_statistic(const MatchupInstance& inst, const Ordering& sigma, std::size_t i, std::size_t j,
                                 std::size_t k2) {
    if (!(i < j && j < inst.size())) throw ValidationError("residual_statistic needs match indices i < j < n");
    auto trials = detail::lineup_trials(inst, sigma);
    std::vector<TrialParams> rest;
    rest.reserve(trials.size() - 2);
    for (std::size_t m = 0; m < trials.size(); ++m)
        if (m != i && m != j) rest.push_back(trials[m]);
    const auto y = detail::convolve_trials(rest);
    auto at = [&](long h) { return (h >= 0 && static_cast<std::size_t>(h) < y.size()) ? y[static_cast<std::size_t>(h)] : 0.0; };
    const long k = static_cast<long>(k2);
    return (at(k - 4) - at(k - 2)) + (at(k - 3) - at(k - 1));
}

enum class DecisionKind { strong_vs_strong, strong_vs_weak, indeterminate_band };

inline const char* to_string(DecisionKind d) {
    switch (d) {
        case DecisionKind::strong_vs_strong: return "StrongVsStrong";
        case DecisionKind::strong_vs_weak: return "StrongVsWeak";
        case DecisionKind::indeterminate_band: return "IndeterminateBand";
    }
    return "?";
}

/// Distance from a regime boundary below which a decision is flagged.
inline constexpr double kBoundaryFlag = 1e-9;

struct Decision {
    DecisionKind kind = DecisionKind::indeterminate_band;
    double mu = 0.0;
    double k = 0.0;
    double upper_threshold = 0.0;  ///< k >= mu + this favours the identity ordering
    double lower_threshold = 0.0;  ///< k <= mu - this favours the reversal
    std::pair<double, double> band;  ///< open interval (mu - lower, mu + upper)
    bool near_boundary = false;
};

inline Decision optimize_by_theorem(const MatchupInstance& inst) {
    Decision d;
    d.mu = expected_score(inst);
    d.k = inst.k();
    const bool ties = inst.model().has_ties();
    d.upper_threshold = ties ? 2.5 : 2.0;
    d.lower_threshold = ties ? 2.0 : 1.0;
    d.band = {d.mu - d.lower_threshold, d.mu + d.upper_threshold};
    const double excess = d.k - d.mu;
    if (excess >= d.upper_threshold)
        d.kind = DecisionKind::strong_vs_strong;
    else if (excess <= -d.lower_threshold)
        d.kind = DecisionKind::strong_vs_weak;
    else
        d.kind = DecisionKind::indeterminate_band;
    d.near_boundary = std::abs(excess - d.upper_threshold) <= kBoundaryFlag ||
                      std::abs(excess + d.lower_threshold) <= kBoundaryFlag;
    return d;
}

enum class SearchStrategy { exhaustive, inversion_local_search };

inline constexpr std::size_t kMaxExhaustivePlayers = 9;
/// Orderings whose tails differ by at most this are reported as tied optima.
inline constexpr double kTailTieTolerance = 1e-12;

struct SearchResult {
    std::vector<Ordering> best_orderings;
    std::vector<double> tails;  ///< parallel to best_orderings
    double best_tail = 0.0;
    std::size_t evaluations = 0;  ///< orderings evaluated (exhaustive) or swaps applied (local search)
};

namespace detail {

inline SearchResult exhaustive_search(const MatchupInstance& inst) {
    const std::size_t n = inst.size();
    if (n > kMaxExhaustivePlayers)
        throw SizeExceeded("exhaustive search is capped at " + std::to_string(kMaxExhaustivePlayers) + " players");
    std::vector<std::pair<Ordering, double>> all;
    Ordering sigma = identity_ordering(n);
    double best = -1.0;
    do {
        const double t = tail_probability(inst, sigma);
        best = std::max(best, t);
        all.emplace_back(sigma, t);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    SearchResult r;
    r.best_tail = best;
    r.evaluations = all.size();
    for (auto& [s, t] : all) {
        if (t >= best - kTailTieTolerance) {
            r.best_orderings.push_back(std::move(s));
            r.tails.push_back(t);
        }
    }
    return r;
}

// Adjacent-swap hill climbing. Inside a decided regime only swaps that move toward the
// predicted ordering are considered and non-worsening ones are taken, so the walk ends
// exactly there; otherwise any strictly improving adjacent swap is taken.
inline SearchResult local_search(const MatchupInstance& inst, Ordering sigma) {
    const std::size_t n = inst.size();
    validate_ordering(sigma, n);
    const auto regime = optimize_by_theorem(inst).kind;
    constexpr double kImprovement = 1e-15;
    SearchResult r;
    while (n >= 2) {
        std::optional<std::size_t> pick;
        double pick_gain = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const bool inversion = sigma[i] > sigma[i + 1];
            double gain = 0.0;
            const double delta = swap_delta(inst, sigma, i, i + 1);
            if (delta != 0.0) gain = delta * residual_statistic(inst, sigma, i, i + 1, inst.k2());
            bool eligible = false;
            switch (regime) {
                case DecisionKind::strong_vs_strong:
                    eligible = inversion && gain >= -kTailTieTolerance;
                    break;
                case DecisionKind::strong_vs_weak:
                    eligible = !inversion && gain >= -kTailTieTolerance;
                    break;
                case DecisionKind::indeterminate_band:
                    eligible = gain > kImprovement;
                    break;
            }
            if (eligible && (!pick || gain > pick_gain)) {
                pick = i;
                pick_gain = gain;
            }
        }
        if (!pick) break;
        std::swap(sigma[*pick], sigma[*pick + 1]);
        ++r.evaluations;
    }
    const double t = tail_probability(inst, sigma);
    r.best_orderings.push_back(std::move(sigma));
    r.tails.push_back(t);
    r.best_tail = t;
    return r;
}

}  // namespace detail

/// Exhaustive search returns every ordering within kTailTieTolerance of the best tail.
/// Local search starts from `start` (identity when absent) and returns the ordering it stops at.
inline SearchResult optimize_search(const MatchupInstance& inst, SearchStrategy strategy,
                                    std::optional<Ordering> start = std::nullopt) {
    if (strategy == SearchStrategy::exhaustive) return detail::exhaustive_search(inst);
    return detail::local_search(inst, start ? std::move(*start) : identity_ordering(inst.size()));
}

}  // namespace ptri
