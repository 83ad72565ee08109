#pragma once

/**
 * @file parity.hpp
 * @brief Even/odd split of the doubled-lattice pgf and the two conditional laws.
 *
 * With G(w) = sum_h P(2X = h) w^h, write G(w) = p(w^2) + w q(w^2). The
 * coefficients of p describe X on the integers, those of q describe X on
 * Z + 1/2. Each normalized part is a Poisson binomial law; factor_poisson_binomial
 * recovers its success probabilities from the roots of p or q.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptri/distribution.hpp"
#include "ptri/errors.hpp"
#include "ptri/polynomial.hpp"

namespace ptri {

struct ParityDecomposition {
    std::vector<double> p_coeffs;  ///< p_k = P(2X = 2k), k = 0..n
    std::vector<double> q_coeffs;  ///< q_k = P(2X = 2k + 1), k = 0..n-1
    double p_norm = 0.0;
    double q_norm = 0.0;

    bool operator==(const ParityDecomposition&) const = default;
};

inline ParityDecomposition split_parity(const HalfLatticePMF& pmf) {
    ParityDecomposition d;
    const std::size_t n = pmf.n();
    d.p_coeffs.reserve(n + 1);
    d.q_coeffs.reserve(n);
    for (std::size_t h = 0; h < pmf.probs.size(); ++h) {
        if (h % 2 == 0) {
            d.p_coeffs.push_back(pmf.probs[h]);
            d.p_norm += pmf.probs[h];
        } else {
            d.q_coeffs.push_back(pmf.probs[h]);
            d.q_norm += pmf.probs[h];
        }
    }
    return d;
}

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// Law of X given its parity, on k + offset for k = 0, 1, ...
struct ConditionalDistribution {
    Parity parity = Parity::even;
    double offset = 0.0;
    std::vector<double> probs;
    std::vector<double> modes;  ///< on the X lattice
    double mean = 0.0;
};

/// Relative slack under which near-maximal entries count as tied modes.
inline constexpr double kModeTieTolerance = 1e-12;

/// Indices within kModeTieTolerance * max of the maximum.
inline std::vector<std::size_t> mode_indices(std::span<const double> probs) {
    std::vector<std::size_t> out;
    if (probs.empty()) return out;
    const double top = *std::max_element(probs.begin(), probs.end());
    for (std::size_t k = 0; k < probs.size(); ++k)
        if (probs[k] >= top - kModeTieTolerance * top) out.push_back(k);
    return out;
}

inline ConditionalDistribution conditional_pmf(const ParityDecomposition& decomp, Parity parity) {
    const auto& coeffs = parity == Parity::even ? decomp.p_coeffs : decomp.q_coeffs;
    const double norm = parity == Parity::even ? decomp.p_norm : decomp.q_norm;
    if (!(norm > 0.0))
        throw EmptyParity(std::string("the ") + to_string(parity) + " part carries no probability mass");
    ConditionalDistribution c;
    c.parity = parity;
    c.offset = parity == Parity::even ? 0.0 : 0.5;
    c.probs.reserve(coeffs.size());
    for (double v : coeffs) c.probs.push_back(v / norm);
    for (std::size_t k : mode_indices(c.probs)) c.modes.push_back(static_cast<double>(k) + c.offset);
    for (std::size_t k = 0; k < c.probs.size(); ++k) c.mean += (static_cast<double>(k) + c.offset) * c.probs[k];
    return c;
}

struct LogConcavity {
    bool holds = true;
    std::optional<std::size_t> first_violation;
};

/// Entries below this are treated as zero when checking that the support is contiguous.
inline constexpr double kUnderflowFloor = 1e-300;

/// c_k^2 >= c_{k-1} c_{k+1} - tol * max(c)^2 at every interior k, plus contiguous support.
inline LogConcavity is_log_concave(std::span<const double> probs, double tol) {
    std::optional<std::size_t> bad;
    auto note = [&](std::size_t k) {
        if (!bad || k < *bad) bad = k;
    };
    double top = 0.0;
    for (double v : probs) top = std::max(top, v);
    const double scale = top * top;
    for (std::size_t k = 1; k + 1 < probs.size(); ++k) {
        if (probs[k] * probs[k] < probs[k - 1] * probs[k + 1] - tol * scale) {
            note(k);
            break;
        }
    }
    std::size_t first = probs.size(), last = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] >= kUnderflowFloor) {
            first = std::min(first, k);
            last = k;
        }
    }
    for (std::size_t k = first; k < last; ++k) {
        if (probs[k] < kUnderflowFloor) {
            note(k);
            break;
        }
    }
    return {!bad.has_value(), bad};
}

struct PoissonBinomialFactorization {
    std::vector<double> success_probs;  ///< sorted non-increasing
    double residual = 0.0;              ///< max |rebuilt - input| / sum(input)
};

/// Reconstruction residual accepted by factor_poisson_binomial.
inline constexpr double kFactorResidual = 1e-8;

namespace detail {

inline double reconstruction_residual(std::span<const double> coeffs, std::span<const double> success, double total) {
    const auto rebuilt = poisson_binomial_pmf(success);
    double worst = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double r = k < rebuilt.size() ? rebuilt[k] * total : 0.0;
        worst = std::max(worst, std::abs(r - coeffs[k]));
    }
    return worst / total;
}

// Roots of a cluster share a well-conditioned centroid even when the individual
// roots of a multiple factor come out complex; collapse nearby roots onto it.
inline std::vector<double> merge_clusters(std::vector<poly::Complex> rs) {
    std::sort(rs.begin(), rs.end(), [](auto x, auto y) { return x.real() < y.real(); });
    std::vector<double> out;
    std::size_t i = 0;
    while (i < rs.size()) {
        std::size_t j = i + 1;
        const double radius = 0.05 * (1.0 + std::abs(rs[i]));
        while (j < rs.size() && std::abs(rs[j] - rs[j - 1]) <= radius) ++j;
        double centroid = 0.0;
        for (std::size_t t = i; t < j; ++t) centroid += rs[t].real();
        centroid /= static_cast<double>(j - i);
        out.insert(out.end(), j - i, centroid);
        i = j;
    }
    return out;
}

inline std::vector<double> success_from_roots(std::span<const double> real_roots, std::size_t zero_roots,
                                              std::size_t missing_degree) {
    std::vector<double> s;
    s.insert(s.end(), zero_roots, 1.0);
    for (double r : real_roots) {
        const double beta = std::max(-r, 0.0);
        s.push_back(1.0 / (1.0 + beta));
    }
    s.insert(s.end(), missing_degree, 0.0);
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

}  // namespace detail

/// Writes c_0 + ... + c_m z^m as sum(c) * prod_j ((1 - s_j) + s_j z).
/// The factorization always has m entries: zero constant terms give s = 1 and
/// vanishing top coefficients give s = 0.
inline PoissonBinomialFactorization factor_poisson_binomial(std::span<const double> coeffs) {
    if (coeffs.empty()) throw ValidationError("factor_poisson_binomial: empty coefficient list");
    double total = 0.0;
    for (double c : coeffs) {
        if (!std::isfinite(c) || c < 0.0) throw ValidationError("factor_poisson_binomial: negative coefficient");
        total += c;
    }
    if (!(total > 0.0)) throw ValidationError("factor_poisson_binomial: coefficients sum to zero");

    std::size_t lo = 0;
    while (coeffs[lo] == 0.0) ++lo;
    std::size_t hi = coeffs.size() - 1;
    while (coeffs[hi] == 0.0) --hi;
    const std::size_t missing = coeffs.size() - 1 - hi;

    PoissonBinomialFactorization out;
    if (hi == lo) {
        out.success_probs = detail::success_from_roots({}, lo, missing);
        out.residual = detail::reconstruction_residual(coeffs, out.success_probs, total);
        return out;
    }

    std::vector<double> core(coeffs.begin() + static_cast<std::ptrdiff_t>(lo),
                             coeffs.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const double top = *std::max_element(core.begin(), core.end());
    for (double& c : core) c /= top;

    std::vector<poly::Complex> rs;
    const bool converged = poly::roots(core, rs);
    if (!converged) throw NotRealRooted("root iteration did not converge");

    // A root is accepted as real and non-positive within this relative slack.
    constexpr double kRootSlack = 1e-7;
    auto certify = [&](std::span<const double> reals) {
        for (double r : reals)
            if (r > kRootSlack * (1.0 + std::abs(r))) return false;
        return true;
    };

    std::vector<double> reals;
    reals.reserve(rs.size());
    for (const auto& r : rs) reals.push_back(r.real());
    if (certify(reals)) {
        out.success_probs = detail::success_from_roots(reals, lo, missing);
        out.residual = detail::reconstruction_residual(coeffs, out.success_probs, total);
        if (out.residual <= kFactorResidual) return out;
    }

    reals = detail::merge_clusters(rs);
    if (certify(reals)) {
        auto merged = detail::success_from_roots(reals, lo, missing);
        const double res = detail::reconstruction_residual(coeffs, merged, total);
        if (res <= kFactorResidual) return {std::move(merged), res};
    }

    double worst_imag = 0.0;
    for (const auto& r : rs) worst_imag = std::max(worst_imag, std::abs(r.imag()) / (1.0 + std::abs(r)));
    throw NotRealRooted("no real non-positive factorization within tolerance (largest relative imaginary part " +
                        std::to_string(worst_imag) + ")");
}

/// Whether L + T w + W w^2 has both roots in the open left half-plane.
/// Only meaningful when L, T, W > 0; anything else raises HypothesisNotMet.
inline bool hurwitz_check(const TrialParams& trial) {
    const double l = trial.loss(), t = trial.tie(), w = trial.win();
    if (!(l > 0.0 && t > 0.0 && w > 0.0))
        throw HypothesisNotMet("stability check needs L, T, W > 0");
    const double disc = t * t - 4.0 * l * w;
    if (disc < 0.0) return -t / (2.0 * w) < 0.0;
    const double s = std::sqrt(disc);
    // (-t + s) suffers cancellation; use the product of roots l / w instead.
    const double r1 = (-t - s) / (2.0 * w);
    const double r2 = (l / w) / r1;
    return r1 < 0.0 && r2 < 0.0;
}

/// Mean and mode distances for one model.
struct GapReport {
    std::optional<double> mean_even_gap;  ///< |mu_even - mu|
    std::optional<double> mean_odd_gap;   ///< |mu_odd - mu|
    std::optional<double> mean_even_odd_gap;
    std::vector<double> even_mode_mean_gaps;  ///< |m - mu| per even mode
    std::vector<double> odd_mode_mean_gaps;
    std::vector<double> even_mode_cond_gaps;  ///< |m - mu_even| per even mode
    std::vector<double> odd_mode_cond_gaps;
    std::optional<double> max_mode_pair_gap;  ///< max |m_even - m_odd|
};

struct StructureReport {
    MomentReport moments;
    std::optional<ConditionalDistribution> even;
    std::optional<ConditionalDistribution> odd;
    std::optional<DegenerateForm> degenerate;
    GapReport gaps;
};

inline StructureReport structure_report(const TrinomialModel& model) {
    StructureReport r;
    r.moments = moment_report(model);
    r.degenerate = detect_degenerate(model);
    const auto decomp = split_parity(pmf(model));
    if (r.moments.mu_even) r.even = conditional_pmf(decomp, Parity::even);
    if (r.moments.mu_odd) r.odd = conditional_pmf(decomp, Parity::odd);

    const double mu = r.moments.mu;
    auto& g = r.gaps;
    if (r.even) {
        const double me = *r.moments.mu_even;
        g.mean_even_gap = std::abs(me - mu);
        for (double m : r.even->modes) {
            g.even_mode_mean_gaps.push_back(std::abs(m - mu));
            g.even_mode_cond_gaps.push_back(std::abs(m - me));
        }
    }
    if (r.odd) {
        const double mo = *r.moments.mu_odd;
        g.mean_odd_gap = std::abs(mo - mu);
        for (double m : r.odd->modes) {
            g.odd_mode_mean_gaps.push_back(std::abs(m - mu));
            g.odd_mode_cond_gaps.push_back(std::abs(m - mo));
        }
    }
    if (r.even && r.odd) {
        g.mean_even_odd_gap = std::abs(*r.moments.mu_even - *r.moments.mu_odd);
        double worst = 0.0;
        for (double me : r.even->modes)
            for (double mo : r.odd->modes) worst = std::max(worst, std::abs(me - mo));
        g.max_mode_pair_gap = worst;
    }
    return r;
}

}  // namespace ptri
