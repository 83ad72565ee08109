#pragma once

// Dense real polynomials in ascending coefficient order, and a Laguerre root finder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ptri::poly {

using Complex = std::complex<double>;

/// Product of (c[j] + d[j] z) over the given linear factors, ascending coefficients.
inline std::vector<double> expand_linear(std::span<const double> constant, std::span<const double> slope) {
    std::vector<double> acc{1.0};
    std::vector<double> next;
    for (std::size_t j = 0; j < constant.size(); ++j) {
        next.assign(acc.size() + 1, 0.0);
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k] += acc[k] * constant[j];
            next[k + 1] += acc[k] * slope[j];
        }
        acc.swap(next);
    }
    return acc;
}

namespace detail {

// One Laguerre root of a[0] + a[1] x + ... + a[m] x^m, starting at x.
// Fractional steps every few iterations break rare limit cycles.
inline Complex laguerre(std::span<const Complex> a, Complex x, bool& converged) {
    constexpr int kMaxIter = 800;
    constexpr double kFrac[] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    const int m = static_cast<int>(a.size()) - 1;
    converged = false;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        Complex b = a[static_cast<std::size_t>(m)];
        double err = std::abs(b);
        Complex d = 0.0, f = 0.0;
        const double abx = std::abs(x);
        for (int j = m - 1; j >= 0; --j) {
            f = x * f + d;
            d = x * d + b;
            b = x * b + a[static_cast<std::size_t>(j)];
            err = std::abs(b) + abx * err;
        }
        err *= kEps;
        if (std::abs(b) <= err) {
            converged = true;
            return x;
        }
        const Complex g = d / b;
        const Complex g2 = g * g;
        const Complex h = g2 - 2.0 * f / b;
        const Complex sq = std::sqrt(static_cast<double>(m - 1) * (static_cast<double>(m) * h - g2));
        Complex gp = g + sq;
        const Complex gm = g - sq;
        if (std::abs(gp) < std::abs(gm)) gp = gm;
        const Complex dx = std::abs(gp) > 0.0 ? static_cast<double>(m) / gp
                                              : std::polar(1.0 + abx, static_cast<double>(iter));
        const Complex x1 = x - dx;
        if (x == x1) {
            converged = true;
            return x;
        }
        if (iter % 10 != 0)
            x = x1;
        else
            x -= kFrac[(iter / 10) % 9] * dx;
    }
    return x;
}

}  // namespace detail

/// All complex roots of a real polynomial with a[deg] != 0 and deg >= 1.
/// Deflation by successive Laguerre roots, each polished against the full polynomial.
/// Returns false if any Laguerre run failed to converge.
inline bool roots(std::span<const double> coeffs, std::vector<Complex>& out) {
    const std::size_t m = coeffs.size() - 1;
    std::vector<Complex> full(coeffs.begin(), coeffs.end());
    std::vector<Complex> ad = full;
    out.assign(m, Complex{});
    bool ok = true;
    for (std::size_t j = m; j >= 1; --j) {
        bool conv = false;
        Complex x = detail::laguerre(std::span<const Complex>(ad.data(), j + 1), Complex{0.0, 0.0}, conv);
        ok = ok && conv;
        if (std::abs(x.imag()) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x.real()))
            x = Complex{x.real(), 0.0};
        out[j - 1] = x;
        Complex b = ad[j];
        for (std::size_t jj = j; jj-- > 0;) {
            const Complex c = ad[jj];
            ad[jj] = b;
            b = x * b + c;
        }
    }
    for (auto& r : out) {
        bool conv = false;
        const Complex polished = detail::laguerre(full, r, conv);
        // A long jump means the polish slid into a neighbouring root of a cluster.
        if (conv && std::abs(polished - r) <= 1e-6 * (1.0 + std::abs(r))) r = polished;
    }
    return ok;
}

}  // namespace ptri::poly
