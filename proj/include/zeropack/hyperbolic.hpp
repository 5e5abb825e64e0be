#pragma once

// Hyperbolic zero packing on the unit disk.
//
// For a candidate f the averaged discrepancy on D(0, r) is
//   (1 / log(1/(1-r^2))) int_{D(0,r)} ((1-|z|^2)^alpha |f|^beta - 1)^2 dA / (1-|z|^2).
// With u = |z|^2 and t = -log(1-u) one has dA / (1-|z|^2) = dt dtheta / (2 pi),
// so the radial rule is Gauss-Legendre in t on [0, log(1/(1-r^2))].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "series.hpp"

namespace zeropack
{

inline constexpr std::size_t disk_degree_cap = 4096;

/// Power series sum c_k z^k on the unit disk, truncated to a polynomial.
struct DiskFunction
{
    std::vector<Complex> coeffs;

    DiskFunction() : coeffs{Complex(0.0)} {}
    explicit DiskFunction(std::vector<Complex> c) : coeffs(std::move(c))
    {
        if (coeffs.empty()) {
            throw std::invalid_argument("DiskFunction: empty coefficient list");
        }
        if (coeffs.size() > disk_degree_cap + 1) {
            throw std::invalid_argument("DiskFunction: degree exceeds 4096");
        }
        for (const Complex &c : coeffs) {
            if (!is_finite(c)) {
                throw std::invalid_argument("DiskFunction: non-finite coefficient");
            }
        }
    }

    std::size_t degree() const { return coeffs.size() - 1; }
    Complex operator()(Complex z) const { return horner(coeffs, z); }
    Complex derivative(Complex z) const { return horner_derivative(coeffs, z); }
    bool is_zero() const
    {
        return std::all_of(coeffs.begin(), coeffs.end(), [](Complex c) { return c == Complex(0.0); });
    }
};

/// Gauss-Legendre in t = -log(1 - |z|^2) on [0, log(1/(1-r^2))] times uniform angles.
class DiskQuadrature
{
public:
    DiskQuadrature(double r, int n_radial = 2048, int n_angular = 512) : m_r(r)
    {
        detail::require(r > 0.0 && r < 1.0, "DiskQuadrature: r must lie in (0, 1)");
        detail::require(n_radial >= 1 && n_angular >= 1, "DiskQuadrature: node counts must be positive");
        m_log_measure = -std::log1p(-r * r);
        const QuadratureRule1D rule = gauss_legendre(n_radial, 0.0, m_log_measure);
        m_t = rule.nodes;
        m_weights = rule.weights;
        m_u.resize(m_t.size());
        for (std::size_t i = 0; i < m_t.size(); ++i) {
            m_u[i] = -std::expm1(-m_t[i]);
        }
        m_angles = detail::uniform_angles(n_angular);
    }

    double r() const { return m_r; }
    /// log(1/(1-r^2)), the hyperbolic measure of D(0, r).
    double log_measure() const { return m_log_measure; }
    int n_radial() const { return static_cast<int>(m_t.size()); }
    int n_angular() const { return static_cast<int>(m_angles.size()); }
    const std::vector<double> &u() const { return m_u; }
    const std::vector<double> &weights() const { return m_weights; }
    const std::vector<Complex> &angles() const { return m_angles; }

    /// int_{D(0,r)} g(u, |f|) dA / (1 - |z|^2), radial rings split across threads.
    template <typename Fn>
    double integrate(const DiskFunction &f, Fn &&g, unsigned threads = 1) const
    {
        std::vector<double> partial(m_u.size(), 0.0);
        parallel_for_blocks(m_u.size(), threads, [&](std::size_t i) {
            const double u = m_u[i];
            const double rho = std::sqrt(u);
            std::vector<Complex> scaled(f.coeffs.size());
            double power = 1.0;
            for (std::size_t k = 0; k < scaled.size(); ++k) {
                scaled[k] = f.coeffs[k] * power;
                power *= rho;
            }
            partial[i] = m_weights[i] * detail::ring_mean(scaled, m_angles, [&](double a) { return g(u, a); });
        });
        return pairwise_sum(partial);
    }

    DiskQuadrature halved() const
    {
        return DiskQuadrature(m_r, std::max(1, n_radial() / 2), std::max(1, n_angular() / 2));
    }

private:
    double m_r;
    double m_log_measure = 0.0;
    std::vector<double> m_t;
    std::vector<double> m_u;
    std::vector<double> m_weights;
    std::vector<Complex> m_angles;
};

/// Averaged ((1-|z|^2)^alpha |f|^beta - 1)^2 over D(0, r) in the hyperbolic measure.
/// Any candidate gives an upper bound for the corresponding packing density.
inline double hyperbolic_discrepancy(const DiskFunction &f, double r, double alpha, double beta,
                                     const DiskQuadrature &quad, unsigned threads = 1)
{
    detail::require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta),
                    "hyperbolic_discrepancy: alpha and beta must be positive");
    detail::require(quad.r() == r, "hyperbolic_discrepancy: quadrature built for a different radius");
    const double total = quad.integrate(
        f,
        [alpha, beta](double u, double a) {
            const double d = std::pow(1.0 - u, alpha) * std::pow(a, beta) - 1.0;
            return d * d;
        },
        threads);
    return total / quad.log_measure();
}

inline double hyperbolic_discrepancy(const DiskFunction &f, double r, const DiskQuadrature &quad, unsigned threads = 1)
{
    return hyperbolic_discrepancy(f, r, 1.0, 1.0, quad, threads);
}

struct TightDiscrepancy
{
    double value = 0.0;
    /// Standard discrepancy restricted to D(0, r).
    double inner = 0.0;
    /// (1 / log(1/(1-r^2))) int_{r^2 < |z|^2 < 1 - 1e-12} (1-|z|^2) |f|^2 dA.
    double annulus = 0.0;
    /// Upper bound for the omitted part |z|^2 > 1 - 1e-12, same normalization.
    double tail = 0.0;
};

/// Tight variant: the target is the indicator of D(0, r), so outside the disk
/// the integrand is (1-|z|^2)^2 |f|^2. The annulus term uses the exact moments
/// int u^k (1-u) du of the angular mean sum |c_k|^2 u^k.
inline TightDiscrepancy tight_discrepancy(const DiskFunction &f, double r, const DiskQuadrature &quad,
                                          unsigned threads = 1)
{
    constexpr double cutoff = 1e-12;
    TightDiscrepancy out;
    out.inner = hyperbolic_discrepancy(f, r, 1.0, 1.0, quad, threads);
    const double a = r * r;
    const double b = 1.0 - cutoff;
    double annulus = 0.0;
    double tail = 0.0;
    double pa = a;
    double pb = b;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        const double c2 = std::norm(f.coeffs[k]);
        const double kk = static_cast<double>(k);
        // [u^{k+1}/(k+1) - u^{k+2}/(k+2)] from a to b, grouped to limit cancellation.
        const double moment = (pb - pa) / (kk + 1.0) - (pb * b - pa * a) / (kk + 2.0);
        annulus += c2 * std::max(0.0, moment);
        tail += c2 * 0.5 * cutoff * cutoff;
        pa *= a;
        pb *= b;
    }
    out.annulus = annulus / quad.log_measure();
    out.tail = tail / quad.log_measure();
    out.value = out.inner + out.annulus;
    return out;
}

/// b^2 - b sqrt(pi) + 1.
inline double hyperbolic_gaf_expected(double b)
{
    detail::require(b > 0.0 && std::isfinite(b), "hyperbolic_gaf_expected: b must be positive");
    return b * b - b * sqrt_pi + 1.0;
}

inline constexpr double hyperbolic_gaf_tail_limit = 1e-6;

/// sum_{j > N} (j+1) r^{2j} (1-r^2)^2.
inline double hyperbolic_gaf_tail(double r, int truncation)
{
    detail::require(r > 0.0 && r < 1.0, "hyperbolic_gaf_tail: r must lie in (0, 1)");
    detail::require(truncation >= 0, "hyperbolic_gaf_tail: truncation must be nonnegative");
    const double s = r * r;
    const double n = static_cast<double>(truncation) + 1.0;
    // sum_{j >= n} (j+1) s^j = s^n ((n+1) - n s) / (1-s)^2.
    return std::pow(s, n) * ((n + 1.0) - n * s);
}

/// Smallest N whose tail bound is below the limit.
inline int hyperbolic_gaf_truncation(double r)
{
    int n = 1;
    while (hyperbolic_gaf_tail(r, n) >= hyperbolic_gaf_tail_limit) {
        ++n;
        if (static_cast<std::size_t>(n) > disk_degree_cap) {
            throw numeric_error("hyperbolic GAF: truncation exceeds the degree cap");
        }
    }
    return n;
}

/// sum_{j <= N} eta_j sqrt(j+1) z^j with standard complex Gaussian eta_j.
inline DiskFunction hyperbolic_gaf_sample(int truncation, RngStream &rng, double scale = 1.0)
{
    std::vector<Complex> c(static_cast<std::size_t>(truncation) + 1);
    for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] = scale * std::sqrt(static_cast<double>(j) + 1.0) * sample_standard_complex_gaussian(rng);
    }
    return DiskFunction(std::move(c));
}

struct DiskGrid
{
    int radial = 64;
    int angular = 256;
};

/// Monte Carlo estimate of E rho_{bG}(r). Trial t draws its coefficients from
/// stream (seed, t), so the result does not depend on the thread count. The
/// expectation of the integrand is the same at every point, so a coarse rule
/// only adds variance, never bias.
inline McEstimate hyperbolic_gaf_mc(double r, double b, std::optional<int> truncation, int trials, std::uint64_t seed,
                                    unsigned threads = 1, DiskGrid grid = {})
{
    detail::require(r > 0.0 && r < 1.0, "hyperbolic_gaf_mc: r must lie in (0, 1)");
    detail::require(b > 0.0 && std::isfinite(b), "hyperbolic_gaf_mc: b must be positive");
    detail::require(trials >= 2, "hyperbolic_gaf_mc: need at least two trials");
    int n = 0;
    if (truncation) {
        detail::require(*truncation >= 1, "hyperbolic_gaf_mc: truncation must be positive");
        if (hyperbolic_gaf_tail(r, *truncation) >= hyperbolic_gaf_tail_limit) {
            throw numeric_error("hyperbolic_gaf_mc: truncation too small for the tail bound at r");
        }
        n = *truncation;
    } else {
        n = hyperbolic_gaf_truncation(r);
    }
    const DiskQuadrature quad(r, grid.radial, grid.angular);
    std::vector<double> samples(static_cast<std::size_t>(trials));
    parallel_for_blocks(samples.size(), threads, [&](std::size_t t) {
        RngStream rng(seed, t);
        const DiskFunction g = hyperbolic_gaf_sample(n, rng, b);
        samples[t] = hyperbolic_discrepancy(g, r, 1.0, 1.0, quad, 1);
    });
    return summarize_trials(std::move(samples), n);
}

struct HalfDiskIdentity
{
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double b_f = 0.0;
};

/// After scaling f so that int_{D(0,1/2)} |f|^2 (1-|z|^2) dA = 1 and setting
/// b_f = int_{D(0,1/2)} |f| dA:
///   int_{D(0,1/2)} (b_f |f| (1-|z|^2) - 1)^2 dA / (1-|z|^2) = log(4/3) - b_f^2.
inline HalfDiskIdentity halfdisk_identity_check(const DiskFunction &f, int n_radial = 256, int n_angular = 256)
{
    detail::require(!f.is_zero(), "halfdisk_identity_check: f must be nonzero");
    const QuadratureRule1D rule = gauss_legendre(n_radial, 0.0, 0.25);
    const std::vector<Complex> angles = detail::uniform_angles(n_angular);
    // dA = du dtheta / (2 pi): the ring mean times du.
    std::vector<std::vector<double>> ring_abs(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double rho = std::sqrt(rule.nodes[i]);
        ring_abs[i].reserve(angles.size());
        for (const Complex &w : angles) {
            ring_abs[i].push_back(std::abs(f(rho * w)));
        }
    }
    auto integrate = [&](auto &&g) {
        std::vector<double> rows(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            double s = 0.0;
            for (double a : ring_abs[i]) {
                s += g(rule.nodes[i], a);
            }
            rows[i] = rule.weights[i] * s / static_cast<double>(angles.size());
        }
        return pairwise_sum(rows);
    };
    const double norm2 = integrate([](double u, double a) { return a * a * (1.0 - u); });
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
        throw numeric_error("halfdisk_identity_check: normalization integral vanished");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    HalfDiskIdentity out;
    out.b_f = integrate([scale](double, double a) { return scale * a; });
    const double b = out.b_f;
    out.lhs = integrate([b, scale](double u, double a) {
        const double d = b * scale * a * (1.0 - u) - 1.0;
        return d * d / (1.0 - u);
    });
    out.rhs = std::log(4.0 / 3.0) - b * b;
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

/// int_{D(0,r)} |f|^2 (1-|z|^2) dA from the moments r^{2k+2}/(k+1) - r^{2k+4}/(k+2).
inline double weighted_bergman_norm2(const DiskFunction &f, double r)
{
    const double s = r * r;
    double acc = 0.0;
    double p = s;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        const double kk = static_cast<double>(k);
        acc += std::norm(f.coeffs[k]) * (p / (kk + 1.0) - p * s / (kk + 2.0));
        p *= s;
    }
    return acc;
}

/// ||f||_{A^2_1}^2 = sum |c_k|^2 / ((k+1)(k+2)).
inline double a21_norm2(const DiskFunction &f)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        const double kk = static_cast<double>(k);
        acc += std::norm(f.coeffs[k]) / ((kk + 1.0) * (kk + 2.0));
    }
    return acc;
}

/// Euclidean gradient of (1-|z|^2)|f(z)| written as a complex number.
/// At a zero of f the function has a cone point; the steepest slope
/// (1-|z|^2)|f'(z)| is returned there.
inline double weighted_modulus_gradient(const DiskFunction &f, Complex z)
{
    const Complex v = f(z);
    const Complex d = f.derivative(z);
    const double a = std::abs(v);
    const double w = 1.0 - std::norm(z);
    if (a == 0.0) {
        return w * std::abs(d);
    }
    return std::abs(w * v * std::conj(d) / a - 2.0 * z * a);
}

struct InequalityEntry
{
    std::string name;
    Complex z;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct InequalityReport
{
    std::vector<InequalityEntry> entries;
    int failures = 0;
};

/// Pointwise Bergman-kernel bounds for f and f', the gradient bound for
/// (1-|z|^2)|f|, and the dilation bound
///   ||f_r||_{A^1} <= r^{-2} (log 1/(1-r^2))^{1/2} ||f||_{A^2_1}.
/// A relative slack of 1e-9 absorbs rounding.
inline InequalityReport inequality_suite(const DiskFunction &f, double r, std::span<const Complex> test_points)
{
    detail::require(r > 0.0 && r < 1.0, "inequality_suite: r must lie in (0, 1)");
    constexpr double slack = 1e-9;
    InequalityReport rep;
    auto record = [&](std::string name, Complex z, double lhs, double rhs) {
        const bool ok = lhs <= rhs * (1.0 + slack) + 1e-300;
        rep.entries.push_back({std::move(name), z, lhs, rhs, ok});
        if (!ok) {
            ++rep.failures;
        }
    };

    const double r2 = r * r;
    const double energy = weighted_bergman_norm2(f, r);
    for (const Complex &z : test_points) {
        const double gap = r2 - std::norm(z);
        detail::require(gap > 0.0, "inequality_suite: test points must lie in D(0, r)");
        record("pointwise_f", z, std::norm(f(z)), 2.0 * r2 * r2 / (gap * gap * gap) * energy);
        record("pointwise_fprime", z, std::norm(f.derivative(z)),
               24.0 * r2 * r2 * r2 / (gap * gap * gap * gap * gap) * energy);
        record("gradient", z, weighted_modulus_gradient(f, z),
               (8.0 + 5.0 * (1.0 - r2) / gap) * r2 * r / std::pow(gap, 1.5) * std::sqrt(energy));
    }

    const QuadratureRule1D rule = gauss_legendre(256, 0.0, r2);
    const std::vector<Complex> angles = detail::uniform_angles(512);
    std::vector<double> rows(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double rho = std::sqrt(rule.nodes[i]);
        double s = 0.0;
        for (const Complex &w : angles) {
            s += std::abs(f(rho * w));
        }
        rows[i] = rule.weights[i] * s / static_cast<double>(angles.size());
    }
    const double dilated_a1 = pairwise_sum(rows) / r2;
    record("dilation", Complex(0.0), dilated_a1, std::sqrt(-std::log1p(-r2)) / r2 * std::sqrt(a21_norm2(f)));
    return rep;
}

struct ThresholdCheck
{
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ProofConstantsReport
{
    ThresholdCheck case_iia;
    ThresholdCheck case_iiba;
    ThresholdCheck case_iibb;
    double rho1 = 0.0;
    double rho2 = 0.0;
    ThresholdCheck final_bound;

    bool all_pass() const { return case_iia.pass && case_iiba.pass && case_iibb.pass && final_bound.pass; }
};

/// int_{D(0,1/5)} ((17/16)(1-|z|^2) - 1)^2 dA / (1-|z|^2) reduced to
/// int_0^{1/25} ((17/16)(1-u) - 1)^2 / (1-u) du; the integrand is smooth, so a
/// 32-point Gauss rule is exact to rounding.
inline double case_iia_integral()
{
    const QuadratureRule1D rule = gauss_legendre(32, 0.0, 1.0 / 25.0);
    return rule.integrate([](double u) {
        const double d = (17.0 / 16.0) * (1.0 - u) - 1.0;
        return d * d / (1.0 - u);
    });
}

inline ProofConstantsReport proof_constants_report()
{
    ProofConstantsReport rep;
    auto check = [](double value, double threshold) { return ThresholdCheck{value, threshold, value > threshold}; };

    rep.case_iia = check(case_iia_integral(), 1.0 / 14000.0);

    const double delta = 1.0 / 2214.0;
    const double bracket = 1.0 / 18.0 - 41.0 * delta;
    rep.case_iiba = check(delta / (15.0 * pi) * bracket * bracket, 1.314e-8);

    rep.case_iibb = check(1.0 / (9.0 * 123.0 * 123.0), 7.3e-6);

    rep.rho1 = 1.3e-8;
    rep.rho2 = 4.0 / 9.0 * rep.rho1;
    rep.final_bound = check(rep.rho2 / std::log(4.0 / 3.0), 2e-8);
    return rep;
}

struct SchafliTiling
{
    int p = 0;
    int q = 0;
    double area = 0.0;
};

/// a_{p,q} = (p - 2 - 2p/q) / 4; a tiling by regular p-gons with q at each
/// vertex exists exactly when a_{p,q} > 0.
inline SchafliTiling schafli_area(int p, int q)
{
    detail::require(p >= 3 && q >= 3, "schafli_area: p and q must be at least 3");
    return {p, q, (static_cast<double>((p - 2) * q - 2 * p) / q) / 4.0};
}

inline bool schafli_exists(int p, int q)
{
    detail::require(p >= 3 && q >= 3, "schafli_area: p and q must be at least 3");
    return (p - 2) * q - 2 * p > 0;
}

/// All p, q >= 3 with 4/p + 2/q = 1, i.e. tilings whose tiles have area 1/2.
inline std::vector<SchafliTiling> schafli_solutions()
{
    std::vector<SchafliTiling> out;
    // q = 2p / (p - 4) >= 3 forces 4 < p <= 12.
    for (int p = 5; p <= 12; ++p) {
        if ((2 * p) % (p - 4) == 0) {
            const int q = 2 * p / (p - 4);
            if (q >= 3) {
                out.push_back(schafli_area(p, q));
            }
        }
    }
    return out;
}

} // namespace zeropack
