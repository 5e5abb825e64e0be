#pragma once

#include <complex>
#include <span>
#include <vector>

#include "numerics.hpp"

namespace zeropack
{

/// sum_k c_k z^k by Horner's rule.
inline Complex horner(std::span<const Complex> coeffs, Complex z)
{
    Complex acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

/// sum_k k c_k z^{k-1}.
inline Complex horner_derivative(std::span<const Complex> coeffs, Complex z)
{
    Complex acc(0.0);
    for (std::size_t k = coeffs.size(); k-- > 1;) {
        acc = acc * z + static_cast<double>(k) * coeffs[k];
    }
    return acc;
}

namespace detail
{

// Mean over M uniform angles of g(|sum_j c_j e^{i j theta}|) for one ring whose
// radius is already folded into the coefficients.
template <typename Fn>
double ring_mean(std::span<const Complex> coeffs, const std::vector<Complex> &unit_roots, Fn &&g)
{
    double s = 0.0;
    for (const Complex &w : unit_roots) {
        s += g(std::abs(horner(coeffs, w)));
    }
    return s / static_cast<double>(unit_roots.size());
}

inline std::vector<Complex> uniform_angles(int count, double offset = 0.5)
{
    std::vector<Complex> roots(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double theta = 2.0 * pi * (k + offset) / count;
        roots[static_cast<std::size_t>(k)] = {std::cos(theta), std::sin(theta)};
    }
    return roots;
}

} // namespace detail

} // namespace zeropack
