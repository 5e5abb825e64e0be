#pragma once

// Cubic Bargmann-Fock projection Pi_1[E_1 f |f|^2] on polynomials and the
// stationary-wave equation omega f = Pi_1[E_1 f |f|^2].
//
// With dA = dx dy / pi the Gaussian moments are
//   int |w|^{2n} e^{-2|w|^2} dA(w) = n! / 2^{n+1},
// so for f = sum c_k z^k the projection has coefficients
//   g_m = sum_{a+b-c=m} c_a c_b conj(c_c) (a+b)! / (2^{a+b+1} m!).

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace zeropack
{

inline constexpr std::size_t fock_default_degree_cap = 64;

/// Polynomial sum_k coeffs[k] z^k in the Fock space with weight e^{-|z|^2} dA.
struct FockPolynomial
{
    std::vector<Complex> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

namespace detail
{

inline void check_fock(const FockPolynomial &f, std::size_t cap)
{
    if (f.coeffs.empty()) {
        throw std::invalid_argument("FockPolynomial: empty coefficient list");
    }
    if (f.degree() > cap) {
        throw std::invalid_argument("FockPolynomial: degree exceeds cap");
    }
    for (const Complex &c : f.coeffs) {
        if (!is_finite(c)) {
            throw std::invalid_argument("FockPolynomial: non-finite coefficient");
        }
    }
}

} // namespace detail

/// ||f||^2 = sum |c_k|^2 k!.
inline double fock_norm(const FockPolynomial &f)
{
    double s = 0.0;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        if (f.coeffs[k] != Complex(0.0)) {
            s += std::exp(2.0 * std::log(std::abs(f.coeffs[k])) + std::lgamma(static_cast<double>(k) + 1.0));
        }
    }
    return std::sqrt(s);
}

inline FockPolynomial cubic_projection(const FockPolynomial &f, std::size_t degree_cap = fock_default_degree_cap)
{
    detail::check_fock(f, degree_cap);
    const std::size_t n = f.degree();
    const std::size_t out_degree = 2 * n;

    // kernel[s][m] = s! / (2^{s+1} m!) for s = a + b, evaluated in log space.
    std::vector<double> log_fact(out_degree + 1);
    for (std::size_t k = 0; k <= out_degree; ++k) {
        log_fact[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    auto kernel = [&](std::size_t s, std::size_t m) {
        const double v = std::exp(log_fact[s] - (static_cast<double>(s) + 1.0) * std::log(2.0) - log_fact[m]);
        if (!std::isfinite(v)) {
            throw numeric_error("cubic_projection: factorial ratio overflow");
        }
        return v;
    };

    // pair[s] = sum_{a+b=s} c_a c_b.
    std::vector<Complex> pair(out_degree + 1, Complex(0.0));
    for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = 0; b <= n; ++b) {
            pair[a + b] += f.coeffs[a] * f.coeffs[b];
        }
    }

    FockPolynomial g;
    g.coeffs.assign(out_degree + 1, Complex(0.0));
    for (std::size_t m = 0; m <= out_degree; ++m) {
        Complex acc(0.0);
        for (std::size_t c = 0; c <= n; ++c) {
            const std::size_t s = m + c;
            if (s > out_degree) {
                break;
            }
            acc += pair[s] * std::conj(f.coeffs[c]) * kernel(s, m);
        }
        g.coeffs[m] = acc;
    }
    // Trailing zero coefficients are kept so the output degree is exactly 2N.
    return g;
}

/// ||cubic_projection(f) - omega f||_Fock.
inline double stationary_residual(const FockPolynomial &f, double omega,
                                  std::size_t degree_cap = fock_default_degree_cap)
{
    detail::require(std::isfinite(omega), "stationary_residual: omega must be finite");
    FockPolynomial diff = cubic_projection(f, degree_cap);
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        diff.coeffs[k] -= omega * f.coeffs[k];
    }
    return fock_norm(diff);
}

struct FixedPointResult
{
    FockPolynomial solution;
    std::vector<double> residual_history;
    bool converged = false;
    bool diverged = false;
};

/// Iterates f <- cubic_projection(f) / omega, truncated to degree <= cap and
/// renormalized to ||f||_Fock = 1 after every step (the starting polynomial is
/// normalized as well). Stops when the residual drops below tol, after
/// max_iters steps, or when the residual exceeds ten times its running minimum
/// (diverged). Convergence is not guaranteed; the residual history is always
/// returned.
inline FixedPointResult fixed_point_solve(const FockPolynomial &f0, double omega, int max_iters, double tol,
                                          std::size_t degree_cap = fock_default_degree_cap)
{
    detail::check_fock(f0, degree_cap);
    detail::require(std::isfinite(omega) && omega != 0.0, "fixed_point_solve: omega must be nonzero");
    detail::require(max_iters >= 1, "fixed_point_solve: max_iters must be positive");
    detail::require(tol >= 0.0, "fixed_point_solve: tol must be nonnegative");

    auto normalized = [](FockPolynomial f) {
        const double norm = fock_norm(f);
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw numeric_error("fixed_point_solve: iterate has zero or non-finite norm");
        }
        for (Complex &c : f.coeffs) {
            c /= norm;
        }
        return f;
    };
    auto truncated = [degree_cap](FockPolynomial f) {
        // Galerkin truncation: the iteration lives on polynomials of degree <= cap.
        if (f.coeffs.size() > degree_cap + 1) {
            f.coeffs.resize(degree_cap + 1);
        }
        while (f.coeffs.size() > 1 && f.coeffs.back() == Complex(0.0)) {
            f.coeffs.pop_back();
        }
        return f;
    };

    if (fock_norm(f0) == 0.0) {
        throw std::invalid_argument("fixed_point_solve: starting polynomial is zero");
    }

    FixedPointResult result;
    FockPolynomial f = normalized(f0);
    double best = std::numeric_limits<double>::infinity();
    for (int iter = 0;; ++iter) {
        const double res = stationary_residual(f, omega, degree_cap);
        result.residual_history.push_back(res);
        best = std::min(best, res);
        if (res < tol || res == 0.0) {
            result.converged = true;
            break;
        }
        if (res > 10.0 * best) {
            result.diverged = true;
            break;
        }
        if (iter >= max_iters) {
            break;
        }
        FockPolynomial next = cubic_projection(f, degree_cap);
        for (Complex &c : next.coeffs) {
            c /= omega;
        }
        f = normalized(truncated(std::move(next)));
    }
    result.solution = std::move(f);
    return result;
}

} // namespace zeropack
