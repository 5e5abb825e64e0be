#pragma once

// Planar zero packing on the equilateral triangular lattice, the beta-exponent
// density curve, and the planar Gaussian analytic function benchmark.

#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "series.hpp"
#include "weierstrass.hpp"

namespace zeropack
{

/// The doubly periodic weight F(z) = exp(-c|z|^2 + Re(eta z^2)) |sigma(z)| on the
/// equilateral lattice with half-periods alpha, alpha e^{i pi/3}.
///
/// For c = 1, 2 alpha = pi^{1/2} / 3^{1/4} puts one zero per normalized area 1/2
/// and eta = 1 - zeta(omega1) / (2 alpha) makes F periodic. A general c > 0
/// rescales the lattice by 1/sqrt(c) and uses eta = c - zeta(omega1) / (2 alpha).
class TriangularProfile
{
public:
    explicit TriangularProfile(double weight_exponent = 1.0)
        : m_c(weight_exponent), m_alpha(base_alpha() / std::sqrt(checked(weight_exponent))),
          m_ctx(m_alpha, m_alpha * std::polar(1.0, pi / 3.0)),
          m_eta(m_c - m_ctx.eta1() / (2.0 * m_alpha))
    {}

    /// Half of the nearest-neighbour spacing 2 alpha.
    double alpha() const { return m_alpha; }
    double weight_exponent() const { return m_c; }
    Complex eta() const { return m_eta; }
    const WeierstrassContext &context() const { return m_ctx; }
    Complex period1() const { return 2.0 * m_ctx.omega1(); }
    Complex period2() const { return 2.0 * m_ctx.omega2(); }

    /// Area of the fundamental rhombus in units of dA = dx dy / pi.
    double rhombus_area() const
    {
        const Complex p1 = period1();
        const Complex p2 = period2();
        return std::abs(p1.real() * p2.imag() - p1.imag() * p2.real()) / pi;
    }

    /// log F(z); -infinity on the lattice.
    double log_value(Complex z) const
    {
        return -m_c * std::norm(z) + (m_eta * z * z).real() + m_ctx.log_abs_sigma(z);
    }

    double value(Complex z) const { return std::exp(log_value(z)); }

    /// |F(z + 2 omega_j) - F(z)|.
    double periodicity_residual(Complex z, int j) const
    {
        detail::require(j == 1 || j == 2, "periodicity_residual: j must be 1 or 2");
        return std::abs(value(z + (j == 1 ? period1() : period2())) - value(z));
    }

private:
    static double base_alpha() { return 0.5 * std::sqrt(pi) / std::pow(3.0, 0.25); }

    static double checked(double c)
    {
        detail::require(c > 0.0 && std::isfinite(c), "TriangularProfile: weight exponent must be positive");
        return c;
    }

    double m_c;
    double m_alpha;
    WeierstrassContext m_ctx;
    Complex m_eta;
};

/// Profile values sampled at the m x m midpoints of the rhombus
/// (s, t) -> period1 s + period2 t, stored as logarithms.
struct RhombusGrid
{
    int m = 0;
    std::vector<double> log_values;
};

/// Tabulates log_field at the rhombus midpoints, one row per parallel block.
template <typename LogField>
RhombusGrid sample_rhombus(const LogField &log_field, Complex period1, Complex period2, int m,
                           unsigned threads = 1)
{
    detail::require(m >= 1, "sample_rhombus: grid size must be positive");
    RhombusGrid grid;
    grid.m = m;
    grid.log_values.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    parallel_for_blocks(static_cast<std::size_t>(m), threads, [&](std::size_t row) {
        const double t = (static_cast<double>(row) + 0.5) / m;
        for (int col = 0; col < m; ++col) {
            const double s = (col + 0.5) / m;
            grid.log_values[row * static_cast<std::size_t>(m) + static_cast<std::size_t>(col)] =
                log_field(period1 * s + period2 * t);
        }
    });
    return grid;
}

/// Midpoint-rule moments <F^beta>, <F^{2 beta}> over the rhombus.
inline std::pair<double, double> rhombus_moments(const RhombusGrid &grid, double beta)
{
    const auto m = static_cast<std::size_t>(grid.m);
    std::vector<double> row1(m);
    std::vector<double> row2(m);
    for (std::size_t row = 0; row < m; ++row) {
        double s1 = 0.0;
        double s2 = 0.0;
        for (std::size_t col = 0; col < m; ++col) {
            const double w = std::exp(beta * grid.log_values[row * m + col]);
            s1 += w;
            s2 += w * w;
        }
        row1[row] = s1;
        row2[row] = s2;
    }
    const double cells = static_cast<double>(m * m);
    return {pairwise_sum(row1) / cells, pairwise_sum(row2) / cells};
}

/// Report at resolution m with error estimate |rho(m) - rho(m/2)|.
inline DiscrepancyReport report_from_grids(const RhombusGrid &fine, const RhombusGrid &coarse, double beta)
{
    const auto [m1, m2] = rhombus_moments(fine, beta);
    const auto [c1, c2] = rhombus_moments(coarse, beta);
    const double rho_coarse = 1.0 - c1 * c1 / c2;
    DiscrepancyReport r = make_discrepancy_report(m1, m2);
    r.error_estimate = std::abs(r.rho - rho_coarse);
    return r;
}

/// Density of an arbitrary periodic log-weight over the rhombus spanned by two
/// periods. Used for the lattice density and as a hook for checking the
/// quadrature on known weights.
template <typename LogField>
DiscrepancyReport rhombus_density(const LogField &log_field, Complex period1, Complex period2, double beta,
                                  int grid_m, unsigned threads = 1)
{
    detail::require(beta > 0.0 && std::isfinite(beta), "rhombus_density: beta must be positive");
    detail::require(grid_m >= 16, "rhombus_density: grid must be at least 16");
    const RhombusGrid fine = sample_rhombus(log_field, period1, period2, grid_m, threads);
    const RhombusGrid coarse = sample_rhombus(log_field, period1, period2, grid_m / 2, threads);
    return report_from_grids(fine, coarse, beta);
}

/// beta-exponent discrepancy density of the equilateral lattice with the
/// matched weight exp(-beta |z|^2) |f|^beta = F^beta.
inline DiscrepancyReport planar_lattice_density(double beta, int grid_m, unsigned threads = 1,
                                                double weight_exponent = 1.0)
{
    const TriangularProfile profile(weight_exponent);
    return rhombus_density([&](Complex z) { return profile.log_value(z); }, profile.period1(),
                           profile.period2(), beta, grid_m, threads);
}

struct CurveRow
{
    double beta = 0.0;
    DiscrepancyReport report;
};

/// Lattice density for each beta; the profile is tabulated once and reused.
inline std::vector<CurveRow> density_curve(const std::vector<double> &betas, int grid_m, unsigned threads = 1)
{
    detail::require(!betas.empty(), "density_curve: beta list is empty");
    for (std::size_t i = 0; i < betas.size(); ++i) {
        detail::require(betas[i] > 0.0 && std::isfinite(betas[i]), "density_curve: beta must be positive");
        detail::require(i == 0 || betas[i] > betas[i - 1], "density_curve: betas must be strictly increasing");
    }
    detail::require(grid_m >= 16, "density_curve: grid must be at least 16");
    const TriangularProfile profile;
    auto log_field = [&](Complex z) { return profile.log_value(z); };
    const RhombusGrid fine = sample_rhombus(log_field, profile.period1(), profile.period2(), grid_m, threads);
    const RhombusGrid coarse = sample_rhombus(log_field, profile.period1(), profile.period2(), grid_m / 2, threads);
    std::vector<CurveRow> rows;
    rows.reserve(betas.size());
    for (double beta : betas) {
        rows.push_back({beta, report_from_grids(fine, coarse, beta)});
    }
    return rows;
}

/// CSV with header beta,rho,m1,m2,b_opt,error_estimate; 17 significant digits.
inline void write_curve_csv(std::ostream &os, const std::vector<CurveRow> &rows)
{
    detail::require(!rows.empty(), "write_curve_csv: no rows");
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf << std::setprecision(17);
    buf << "beta,rho,m1,m2,b_opt,error_estimate\n";
    for (const CurveRow &row : rows) {
        const DiscrepancyReport &r = row.report;
        buf << row.beta << ',' << r.rho << ',' << r.m1 << ',' << r.m2 << ',' << r.b_opt << ','
            << r.error_estimate << '\n';
    }
    os << buf.str();
}

/// Logarithmic monopole on the torus C / Lambda: U(z, w) = log F(z - w) + C,
/// with C fixed so that U(., w) has zero mean over the rhombus.
class TorusMonopole
{
public:
    explicit TorusMonopole(int grid_m = 512, unsigned threads = 1)
    {
        const RhombusGrid grid = sample_rhombus([&](Complex z) { return m_profile.log_value(z); },
                                                m_profile.period1(), m_profile.period2(), grid_m, threads);
        m_constant = -pairwise_sum(grid.log_values) / static_cast<double>(grid.log_values.size());
    }

    double operator()(Complex z, Complex w) const { return m_profile.log_value(z - w) + m_constant; }
    double additive_constant() const { return m_constant; }
    const TriangularProfile &profile() const { return m_profile; }

private:
    TriangularProfile m_profile;
    double m_constant = 0.0;
};

// ---------------------------------------------------------------------------
// Planar Gaussian analytic function
// ---------------------------------------------------------------------------

/// E rho_{bF}(R) = b^2 - b sqrt(pi) + 1 for every R.
inline double planar_gaf_expected(double b)
{
    detail::require(b > 0.0 && std::isfinite(b), "planar_gaf_expected: b must be positive");
    return b * b - b * sqrt_pi + 1.0;
}

/// sum_{j > N} (2R^2)^j / j! e^{-2R^2}: the variance of e^{-|z|^2} F(z) carried
/// by the discarded Taylor coefficients at |z| = R.
inline double planar_gaf_tail(double radius, int truncation)
{
    const double lambda = 2.0 * radius * radius;
    double tail = 0.0;
    for (int j = truncation + 1;; ++j) {
        const double term = std::exp(j * std::log(lambda) - std::lgamma(j + 1.0) - lambda);
        tail += term;
        if (j > lambda && term < 1e-18 * std::max(tail, 1e-300)) {
            break;
        }
        if (j > truncation + 100000) {
            break;
        }
    }
    return tail;
}

inline constexpr double planar_gaf_tail_limit = 1e-8;

/// Smallest N with planar_gaf_tail(R, N) below the limit.
inline int planar_gaf_truncation(double radius)
{
    int n = static_cast<int>(2.0 * radius * radius);
    while (planar_gaf_tail(radius, n) >= planar_gaf_tail_limit) {
        ++n;
    }
    return n;
}

/// Polar product grid for disk averages: Gauss-Legendre in u = |z|^2 and
/// uniform angles.
struct PolarGrid
{
    int radial = 0;
    int angular = 0;
};

inline PolarGrid default_planar_grid(double radius)
{
    const int n = static_cast<int>(std::ceil(32.0 * radius));
    return {32 + n, 64 + n};
}

/// rho_{bF}(R) = R^{-2} int_{D(0,R)} (b |F| e^{-|z|^2} - 1)^2 dA for one
/// realization with coefficients xi_j.
inline double planar_gaf_density(std::span<const Complex> xi, double radius, double b, const PolarGrid &grid)
{
    const double r2 = radius * radius;
    const QuadratureRule1D radial = gauss_legendre(grid.radial, 0.0, r2);
    const std::vector<Complex> roots = detail::uniform_angles(grid.angular);
    std::vector<Complex> scaled(xi.size());
    double total = 0.0;
    for (std::size_t i = 0; i < radial.size(); ++i) {
        const double u = radial.nodes[i];
        const double log_r = 0.5 * std::log(u);
        for (std::size_t j = 0; j < xi.size(); ++j) {
            const double jd = static_cast<double>(j);
            const double log_mag = 0.5 * jd * std::log(2.0) - 0.5 * std::lgamma(jd + 1.0) + jd * log_r - u;
            scaled[j] = xi[j] * std::exp(log_mag);
        }
        const double ring = detail::ring_mean(scaled, roots, [b](double a) {
            const double d = b * a - 1.0;
            return d * d;
        });
        total += radial.weights[i] * ring;
    }
    return total / r2;
}

/// Monte Carlo estimate of E rho_{bF}(R). Trial t uses stream (seed, t).
/// truncation = nullopt picks the degree from the tail bound.
inline McEstimate planar_gaf_mc(double radius, double b, std::optional<int> truncation, int trials,
                                std::uint64_t seed, unsigned threads = 1,
                                std::optional<PolarGrid> grid = std::nullopt)
{
    detail::require(radius > 0.0 && std::isfinite(radius), "planar_gaf_mc: R must be positive");
    detail::require(b > 0.0 && std::isfinite(b), "planar_gaf_mc: b must be positive");
    detail::require(trials >= 2, "planar_gaf_mc: need at least two trials");
    int n = 0;
    if (truncation) {
        detail::require(*truncation >= 1, "planar_gaf_mc: truncation must be positive");
        if (planar_gaf_tail(radius, *truncation) >= planar_gaf_tail_limit) {
            throw numeric_error("planar_gaf_mc: truncation degree misses the tail bound");
        }
        n = *truncation;
    } else {
        n = planar_gaf_truncation(radius);
    }
    const PolarGrid g = grid.value_or(default_planar_grid(radius));
    detail::require(g.radial >= 1 && g.angular >= 1, "planar_gaf_mc: empty quadrature grid");
    std::vector<double> samples(static_cast<std::size_t>(trials));
    parallel_for_blocks(samples.size(), threads, [&](std::size_t t) {
        RngStream rng(seed, t);
        std::vector<Complex> xi(static_cast<std::size_t>(n) + 1);
        for (Complex &c : xi) {
            c = sample_standard_complex_gaussian(rng);
        }
        samples[t] = planar_gaf_density(xi, radius, b, g);
    });
    return summarize_trials(std::move(samples), n);
}

} // namespace zeropack
