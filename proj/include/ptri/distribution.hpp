#pragma once

/**
 * @file distribution.hpp
 * @brief Poisson trinomial models: sums of independent {0, 1/2, 1}-valued trials.
 *
 * Trial i scores 1/2 with probability T_i (tie), 1 with probability W_i (win)
 * and 0 with probability L_i = 1 - T_i - W_i (loss). The distribution of the
 * total X is stored on the doubled lattice h = 2X, so index h of a
 * HalfLatticePMF holds P(X = h/2) and the vector has 2n + 1 entries.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptri/errors.hpp"

namespace ptri {

/// Distance from the probability simplex that is silently clamped away.
inline constexpr double kSimplexSlack = 1e-12;

/// One trial's (T, W, L) triple. L is always derived, never supplied.
class TrialParams {
public:
    /// Validates (T, W), clamps noise within kSimplexSlack onto the simplex and derives L.
    static TrialParams make(double tie, double win) {
        if (!std::isfinite(tie) || !std::isfinite(win))
            throw ValidationError("non-finite probability");
        if (tie < -kSimplexSlack) throw ValidationError("negative tie probability " + std::to_string(tie));
        if (win < -kSimplexSlack) throw ValidationError("negative win probability " + std::to_string(win));
        if (tie + win > 1.0 + kSimplexSlack)
            throw ValidationError("tie + win = " + std::to_string(tie + win) + " exceeds 1");
        tie = std::min(std::max(tie, 0.0), 1.0);
        win = std::max(win, 0.0);
        if (tie + win > 1.0) win = 1.0 - tie;
        double loss = (1.0 - tie) - win;
        if (loss < 0.0) loss = 0.0;
        return TrialParams(tie, win, loss);
    }

    double tie() const noexcept { return tie_; }
    double win() const noexcept { return win_; }
    double loss() const noexcept { return loss_; }

    /// Expected score W + T/2.
    double mean() const noexcept { return win_ + 0.5 * tie_; }

    bool operator==(const TrialParams&) const = default;

private:
    TrialParams(double t, double w, double l) : tie_(t), win_(w), loss_(l) {}

    double tie_;
    double win_;
    double loss_;
};

/// Ordered, non-empty family of trials.
class TrinomialModel {
public:
    explicit TrinomialModel(std::vector<TrialParams> trials) : trials_(std::move(trials)) {
        if (trials_.empty()) throw ValidationError("a model needs at least one trial");
    }

    std::size_t size() const noexcept { return trials_.size(); }
    std::span<const TrialParams> trials() const noexcept { return trials_; }
    const TrialParams& operator[](std::size_t i) const { return trials_[i]; }

    bool operator==(const TrinomialModel&) const = default;

private:
    std::vector<TrialParams> trials_;
};

struct RawTrial {
    double tie = 0.0;
    double win = 0.0;
};

inline TrinomialModel build_model(std::span<const RawTrial> raw) {
    if (raw.empty()) throw ValidationError("trials: empty list");
    std::vector<TrialParams> trials;
    trials.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        try {
            trials.push_back(TrialParams::make(raw[i].tie, raw[i].win));
        } catch (const ValidationError& e) {
            throw ValidationError("trials[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return TrinomialModel(std::move(trials));
}

/// P(X = h/2) for h = 0..2n.
struct HalfLatticePMF {
    std::vector<double> probs;

    std::size_t n() const noexcept { return probs.empty() ? 0 : (probs.size() - 1) / 2; }
    bool operator==(const HalfLatticePMF&) const = default;
};

/// Checks shape and normalization of a pmf that did not come from pmf().
inline void validate_pmf(const HalfLatticePMF& pmf) {
    if (pmf.probs.size() < 3 || pmf.probs.size() % 2 == 0)
        throw ValidationError("probs: length must be 2n+1 with n >= 1");
    double total = 0.0;
    for (std::size_t h = 0; h < pmf.probs.size(); ++h) {
        const double v = pmf.probs[h];
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("probs[" + std::to_string(h) + "]: must be a non-negative number");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("probs: entries do not sum to 1");
}

namespace detail {

// Left-to-right convolution on the doubled lattice; an empty span gives the point mass at 0.
inline std::vector<double> convolve_trials(std::span<const TrialParams> trials) {
    std::vector<double> acc{1.0};
    acc.reserve(2 * trials.size() + 1);
    std::vector<double> next;
    for (const auto& t : trials) {
        next.assign(acc.size() + 2, 0.0);
        for (std::size_t h = 0; h < acc.size(); ++h) {
            next[h] += acc[h] * t.loss();
            next[h + 1] += acc[h] * t.tie();
            next[h + 2] += acc[h] * t.win();
        }
        acc.swap(next);
    }
    return acc;
}

}  // namespace detail

inline HalfLatticePMF pmf(const TrinomialModel& model) {
    return HalfLatticePMF{detail::convolve_trials(model.trials())};
}

/// Law of a sum of independent Bernoulli(success[j]), on {0, ..., m}.
inline std::vector<double> poisson_binomial_pmf(std::span<const double> success) {
    std::vector<double> acc{1.0};
    std::vector<double> next;
    for (double q : success) {
        next.assign(acc.size() + 1, 0.0);
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k] += acc[k] * (1.0 - q);
            next[k + 1] += acc[k] * q;
        }
        acc.swap(next);
    }
    return acc;
}

inline double mean(const TrinomialModel& model) {
    double mu = 0.0;
    for (const auto& t : model.trials()) mu += t.mean();
    return mu;
}

/// E[(-1)^S] with S the number of ties; equals the product of (1 - 2 T_j).
inline double alternating_a(const TrinomialModel& model) {
    double a = 1.0;
    for (const auto& t : model.trials()) a *= 1.0 - 2.0 * t.tie();
    return a;
}

namespace detail {

// sum_i weight(i) * prod_{j != i} (1 - 2 T_j), using prefix/suffix products (no division).
template <class Weight>
double leave_one_out_sum(const TrinomialModel& model, Weight weight) {
    const auto trials = model.trials();
    const std::size_t n = trials.size();
    std::vector<double> suffix(n + 1, 1.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * (1.0 - 2.0 * trials[i].tie());
    double prefix = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += weight(trials[i]) * prefix * suffix[i + 1];
        prefix *= 1.0 - 2.0 * trials[i].tie();
    }
    return sum;
}

}  // namespace detail

/// E[X (-1)^S].
inline double alternating_b(const TrinomialModel& model) {
    return detail::leave_one_out_sum(model, [](const TrialParams& t) { return t.win() - 0.5 * t.tie(); });
}

struct BMinusAMu {
    double direct;      ///< b - a * mu
    double lemma_form;  ///< sum_i T_i (W_i - L_i) prod_{j != i} (1 - 2 T_j)
};

inline BMinusAMu b_minus_a_mu(const TrinomialModel& model) {
    const double direct = alternating_b(model) - alternating_a(model) * mean(model);
    const double product_form = detail::leave_one_out_sum(
        model, [](const TrialParams& t) { return t.tie() * (t.win() - t.loss()); });
    return {direct, product_form};
}

/// Whole-lattice moments plus the parity split of the mass.
struct MomentReport {
    double mu = 0.0;
    double a = 0.0;
    double b = 0.0;
    double b_minus_a_mu = 0.0;
    double mass_even = 0.0;
    double mass_odd = 0.0;
    std::optional<double> mu_even;
    std::optional<double> mu_odd;
};

/// Exact parity-mass emptiness: one side is empty iff every T_i is exactly 0 or 1.
/// Returns {even_empty, odd_empty}.
inline std::pair<bool, bool> empty_parities(const TrinomialModel& model) {
    std::size_t certain_ties = 0;
    for (const auto& t : model.trials()) {
        if (t.tie() == 1.0)
            ++certain_ties;
        else if (t.tie() != 0.0)
            return {false, false};
    }
    const bool odd_count = certain_ties % 2 == 1;
    return {odd_count, !odd_count};
}

inline MomentReport moment_report(const TrinomialModel& model) {
    MomentReport r;
    r.mu = mean(model);
    r.a = alternating_a(model);
    r.b = alternating_b(model);
    r.b_minus_a_mu = r.b - r.a * r.mu;
    const auto [even_empty, odd_empty] = empty_parities(model);
    r.mass_even = even_empty ? 0.0 : 0.5 * (1.0 + r.a);
    r.mass_odd = odd_empty ? 0.0 : 0.5 * (1.0 - r.a);
    if (!even_empty) r.mu_even = (r.mu + r.b) / (1.0 + r.a);
    if (!odd_empty) r.mu_odd = (r.mu - r.b) / (1.0 - r.a);
    return r;
}

/// All T_i in {0, 1}: X is a Poisson binomial over the k no-tie trials, shifted by (n - k)/2.
struct DegenerateForm {
    std::size_t k = 0;
    double shift = 0.0;
    std::vector<double> bernoulli_probs;
};

inline std::optional<DegenerateForm> detect_degenerate(const TrinomialModel& model) {
    DegenerateForm form;
    for (const auto& t : model.trials()) {
        if (t.tie() == 0.0) {
            ++form.k;
            form.bernoulli_probs.push_back(t.win());
        } else if (t.tie() != 1.0) {
            return std::nullopt;
        }
    }
    form.shift = 0.5 * static_cast<double>(model.size() - form.k);
    return form;
}

/// The pmf implied by a degenerate form for an n-trial model.
inline HalfLatticePMF reconstruct_degenerate(const DegenerateForm& form, std::size_t n) {
    HalfLatticePMF out{std::vector<double>(2 * n + 1, 0.0)};
    const auto pb = poisson_binomial_pmf(form.bernoulli_probs);
    const std::size_t offset = n - form.k;  // doubled shift
    for (std::size_t j = 0; j < pb.size(); ++j) out.probs[2 * j + offset] = pb[j];
    return out;
}

}  // namespace ptri
