#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace zeropack
{

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt_pi = 1.7724538509055160273;

inline bool is_finite(const Complex &z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// Gamma function
// ---------------------------------------------------------------------------

/// Gamma function for real 0 < x <= 170.
inline double gamma_real(double x)
{
    if (!(x > 0.0) || !(x <= 170.0)) {
        throw std::domain_error("gamma_real: argument outside (0, 170]");
    }
    return std::tgamma(x);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// One-dimensional quadrature rule on an interval. Weights are positive and
/// sum to the interval length.
struct QuadratureRule1D
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <typename Fn>
    double integrate(Fn &&f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            s += weights[i] * f(nodes[i]);
        }
        return s;
    }
};

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2n-1.
inline QuadratureRule1D gauss_legendre(int n, double a, double b)
{
    detail::require(n >= 1, "gauss_legendre: n must be positive");
    detail::require(a < b, "gauss_legendre: need a < b");

    QuadratureRule1D rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = mid - half * x;
        rule.nodes[hi] = mid + half * x;
        rule.weights[lo] = half * w;
        rule.weights[hi] = half * w;
    }
    if (n % 2 == 1) {
        // The middle node is exactly the midpoint.
        rule.nodes[static_cast<std::size_t>(n / 2)] = mid;
    }
    return rule;
}

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// Reproducible random stream identified by (seed, stream_index). Monte Carlo
/// trial t draws from stream (seed, t), so trials can run in any order or on
/// any thread with identical results.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : m_seed(seed), m_stream(stream_index), m_engine(make_engine(seed, stream_index))
    {}

    std::uint64_t seed() const { return m_seed; }
    std::uint64_t stream_index() const { return m_stream; }

    /// A fresh stream sharing this seed.
    RngStream substream(std::uint64_t index) const { return RngStream(m_seed, index); }

    double normal(double stddev) { return std::normal_distribution<double>(0.0, stddev)(m_engine); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(m_engine); }
    std::mt19937_64 &engine() { return m_engine; }

private:
    static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32), 0x7a65726fu};
        return std::mt19937_64(seq);
    }

    std::uint64_t m_seed;
    std::uint64_t m_stream;
    std::mt19937_64 m_engine;
};

/// Draw from N_C(0,1): density e^{-|z|^2} with respect to dx dy / pi.
inline Complex sample_standard_complex_gaussian(RngStream &rng)
{
    const double s = std::sqrt(0.5);
    const double re = rng.normal(s);
    const double im = rng.normal(s);
    return {re, im};
}

} // namespace zeropack
