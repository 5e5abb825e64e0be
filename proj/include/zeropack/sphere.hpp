#pragma once

// Spherical zero packing with logarithmic monopoles.
//
// Points are unit vectors in R^3. On the Riemann sphere with the symmetric
// normalization the monopole is U(z, w) = log|z - w| - 1/2 log(1+|z|^2)
// - 1/2 log(1+|w|^2), which in 3-space reads log(|p - q| / 2). The partition
// function is Z_gamma = int exp(gamma sum_j U(., p_j)) dA_S over the sphere of
// unit normalized area, and the optimal-amplitude discrepancy of a
// configuration is 1 - Z_beta^2 / Z_{2 beta}.
//
// All surface integrals use a Gauss-Legendre (theta) x uniform (phi) rule
// laid out in a canonical frame attached to the configuration: the first point
// sits at the north pole and the first point not collinear with it lies in the
// half-plane y = 0, x > 0. Integrals are therefore invariant under rigid
// rotations of the configuration, and the first point's singularity falls on
// the end of the polar rule rather than between nodes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "report.hpp"

namespace zeropack
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    Vec3 &operator+=(Vec3 b)
    {
        x += b.x;
        y += b.y;
        z += b.z;
        return *this;
    }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 normalized(Vec3 a)
{
    const double n = norm(a);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw numeric_error("normalized: zero or non-finite vector");
    }
    return (1.0 / n) * a;
}

/// Component of v orthogonal to the unit vector p.
inline Vec3 tangential(Vec3 v, Vec3 p) { return v - dot(v, p) * p; }

/// Unit vector in R^3.
using SpherePoint = Vec3;

/// Inverse stereographic projection of the Riemann sphere chart onto the unit sphere.
inline SpherePoint chart_to_sphere(Complex z)
{
    const double r2 = std::norm(z);
    return {2.0 * z.real() / (1.0 + r2), 2.0 * z.imag() / (1.0 + r2), (r2 - 1.0) / (r2 + 1.0)};
}

/// n >= 1 distinct unit vectors.
class SphereConfiguration
{
public:
    static constexpr double min_separation = 1e-9;

    explicit SphereConfiguration(std::vector<SpherePoint> points) : m_points(std::move(points))
    {
        if (m_points.empty()) {
            throw std::invalid_argument("SphereConfiguration: need at least one point");
        }
        for (const SpherePoint &p : m_points) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
                std::abs(norm(p) - 1.0) > 1e-12) {
                throw std::invalid_argument("SphereConfiguration: points must be unit vectors");
            }
        }
        if (min_pairwise_distance() <= min_separation) {
            throw std::invalid_argument("SphereConfiguration: points must be pairwise distinct");
        }
    }

    std::size_t size() const { return m_points.size(); }
    const std::vector<SpherePoint> &points() const { return m_points; }
    const SpherePoint &operator[](std::size_t i) const { return m_points[i]; }

    double min_pairwise_distance() const
    {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_points.size(); ++i) {
            for (std::size_t j = i + 1; j < m_points.size(); ++j) {
                d = std::min(d, norm(m_points[i] - m_points[j]));
            }
        }
        return d;
    }

private:
    std::vector<SpherePoint> m_points;
};

/// Gauss-Legendre in the polar angle theta times uniform azimuth, with weight
/// sin(theta) / 2 folded in. The distance to a pole is 2 sin(theta/2), so
/// |x - p|^gamma at the canonical first point is smooth in theta.
class SphereQuadrature
{
public:
    explicit SphereQuadrature(int n_polar = 256, int n_azimuth = 512) : m_polar(n_polar), m_azimuth(n_azimuth)
    {
        detail::require(n_polar >= 1, "SphereQuadrature: n_polar must be positive");
        detail::require(n_azimuth >= 2 && n_azimuth % 2 == 0, "SphereQuadrature: n_azimuth must be even");
        const QuadratureRule1D rule = gauss_legendre(n_polar, 0.0, pi);
        m_nodes.reserve(static_cast<std::size_t>(n_polar) * static_cast<std::size_t>(n_azimuth));
        m_weights.reserve(m_nodes.capacity());
        for (int i = 0; i < n_polar; ++i) {
            const double theta = rule.nodes[static_cast<std::size_t>(i)];
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const double w = 0.5 * s * rule.weights[static_cast<std::size_t>(i)] / n_azimuth;
            for (int k = 0; k < n_azimuth; ++k) {
                const double phi = 2.0 * pi * (k + 0.5) / n_azimuth;
                m_nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
                m_weights.push_back(w);
            }
        }
    }

    int n_polar() const { return m_polar; }
    int n_azimuth() const { return m_azimuth; }
    std::size_t size() const { return m_nodes.size(); }
    const std::vector<Vec3> &nodes() const { return m_nodes; }
    const std::vector<double> &weights() const { return m_weights; }

    /// The rule with half the nodes in each direction, for error estimates.
    SphereQuadrature halved() const { return SphereQuadrature(std::max(1, m_polar / 2), std::max(2, 2 * (m_azimuth / 4))); }

private:
    int m_polar;
    int m_azimuth;
    std::vector<Vec3> m_nodes;
    std::vector<double> m_weights;
};

/// log(|p - q| / 2).
inline double monopole(const SpherePoint &p, const SpherePoint &q)
{
    const double d = norm(p - q);
    if (d == 0.0) {
        throw numeric_error("monopole: singular at coincident points");
    }
    return std::log(0.5 * d);
}

/// The same monopole written in the Riemann sphere chart.
inline double monopole_chart(Complex z, Complex w)
{
    if (z == w) {
        throw numeric_error("monopole: singular at coincident points");
    }
    return std::log(std::abs(z - w)) - 0.5 * std::log1p(std::norm(z)) - 0.5 * std::log1p(std::norm(w));
}

namespace detail
{

struct Frame
{
    Vec3 e1;
    Vec3 e2;
    Vec3 e3;

    Vec3 to_frame(Vec3 v) const { return {dot(e1, v), dot(e2, v), dot(e3, v)}; }
    Vec3 from_frame(Vec3 v) const { return v.x * e1 + v.y * e2 + v.z * e3; }
};

inline Frame canonical_frame(std::span<const SpherePoint> points)
{
    Frame f;
    f.e3 = points[0];
    bool found = false;
    for (std::size_t j = 1; j < points.size(); ++j) {
        const Vec3 t = tangential(points[j], f.e3);
        if (norm(t) > 1e-12) {
            f.e1 = normalized(t);
            found = true;
            break;
        }
    }
    if (!found) {
        // Least aligned coordinate axis.
        const double ax = std::abs(f.e3.x);
        const double ay = std::abs(f.e3.y);
        const double az = std::abs(f.e3.z);
        Vec3 axis{0.0, 0.0, 1.0};
        if (ax <= ay && ax <= az) {
            axis = {1.0, 0.0, 0.0};
        } else if (ay <= az) {
            axis = {0.0, 1.0, 0.0};
        }
        f.e1 = normalized(tangential(axis, f.e3));
    }
    f.e2 = cross(f.e3, f.e1);
    return f;
}

} // namespace detail

/// Z_gamma(p_1..p_n) on the quadrature; an empty point list gives 1.
inline double partition_function(std::span<const SpherePoint> points, double gamma, const SphereQuadrature &quad,
                                  unsigned threads = 1)
{
    detail::require(gamma > 0.0 && std::isfinite(gamma), "partition_function: gamma must be positive");
    if (points.empty()) {
        return std::accumulate(quad.weights().begin(), quad.weights().end(), 0.0);
    }
    const detail::Frame frame = detail::canonical_frame(points);
    std::vector<Vec3> local(points.size());
    std::transform(points.begin(), points.end(), local.begin(), [&](Vec3 p) { return frame.to_frame(p); });

    const auto per_row = static_cast<std::size_t>(quad.n_azimuth());
    const auto rows = static_cast<std::size_t>(quad.n_polar());
    std::vector<double> partial(rows, 0.0);
    parallel_for_blocks(rows, threads, [&](std::size_t row) {
        double s = 0.0;
        for (std::size_t k = row * per_row; k < (row + 1) * per_row; ++k) {
            const Vec3 x = quad.nodes()[k];
            double log_weight = 0.0;
            for (const Vec3 &p : local) {
                log_weight += std::log(0.5 * norm(x - p));
            }
            s += quad.weights()[k] * std::exp(gamma * log_weight);
        }
        partial[row] = s;
    });
    return pairwise_sum(partial);
}

inline double partition_function(const SphereConfiguration &config, double gamma, const SphereQuadrature &quad,
                                 unsigned threads = 1)
{
    return partition_function(std::span<const SpherePoint>(config.points()), gamma, quad, threads);
}

/// Z_beta, Z_{2 beta} and, optionally, the tangential expectations
/// E^gamma[g_j] of g_j(x) = grad_{p_j} log|x - p_j| = (p_j - x) / |p_j - x|^2
/// under the measures exp(gamma sum U) dA_S / Z_gamma.
struct EnsembleEvaluation
{
    double z_beta = 0.0;
    double z_2beta = 0.0;
    std::vector<Vec3> mean_grad_beta;
    std::vector<Vec3> mean_grad_2beta;

    /// log(Z_beta^2 / Z_{2 beta}).
    double objective() const { return 2.0 * std::log(z_beta) - std::log(z_2beta); }

    /// Ascent direction 2 beta (E^beta g_j - E^{2 beta} g_j) for point j.
    Vec3 ascent(std::size_t j, double beta) const
    {
        return (2.0 * beta) * (mean_grad_beta[j] - mean_grad_2beta[j]);
    }

    double residual() const
    {
        double r = 0.0;
        for (std::size_t j = 0; j < mean_grad_beta.size(); ++j) {
            r = std::max(r, norm(mean_grad_beta[j] - mean_grad_2beta[j]));
        }
        return r;
    }
};

inline EnsembleEvaluation evaluate_ensemble(const SphereConfiguration &config, double beta,
                                            const SphereQuadrature &quad, bool with_gradients = true,
                                            unsigned threads = 1)
{
    detail::require(beta > 0.0 && std::isfinite(beta), "evaluate_ensemble: beta must be positive");
    const auto &points = config.points();
    const std::size_t n = points.size();
    const detail::Frame frame = detail::canonical_frame(points);
    std::vector<Vec3> local(n);
    std::transform(points.begin(), points.end(), local.begin(), [&](Vec3 p) { return frame.to_frame(p); });

    const auto per_row = static_cast<std::size_t>(quad.n_azimuth());
    const auto rows = static_cast<std::size_t>(quad.n_polar());
    struct Partial
    {
        double z1 = 0.0;
        double z2 = 0.0;
        std::vector<Vec3> g1;
        std::vector<Vec3> g2;
    };
    std::vector<Partial> partial(rows);
    parallel_for_blocks(rows, threads, [&](std::size_t row) {
        Partial &acc = partial[row];
        if (with_gradients) {
            acc.g1.assign(n, Vec3{});
            acc.g2.assign(n, Vec3{});
        }
        std::vector<Vec3> diff(n);
        std::vector<double> d2(n);
        for (std::size_t k = row * per_row; k < (row + 1) * per_row; ++k) {
            const Vec3 x = quad.nodes()[k];
            double log_weight = 0.0;
            bool singular = false;
            for (std::size_t j = 0; j < n; ++j) {
                diff[j] = local[j] - x;
                d2[j] = dot(diff[j], diff[j]);
                if (d2[j] == 0.0) {
                    singular = true;
                    break;
                }
                log_weight += 0.5 * std::log(0.25 * d2[j]);
            }
            if (singular) {
                continue;
            }
            const double w1 = quad.weights()[k] * std::exp(beta * log_weight);
            const double w2 = quad.weights()[k] * std::exp(2.0 * beta * log_weight);
            acc.z1 += w1;
            acc.z2 += w2;
            if (with_gradients) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double inv = 1.0 / d2[j];
                    acc.g1[j] += (w1 * inv) * diff[j];
                    acc.g2[j] += (w2 * inv) * diff[j];
                }
            }
        }
    });

    std::vector<double> z1(rows);
    std::vector<double> z2(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        z1[r] = partial[r].z1;
        z2[r] = partial[r].z2;
    }
    EnsembleEvaluation out;
    out.z_beta = pairwise_sum(z1);
    out.z_2beta = pairwise_sum(z2);
    if (!(out.z_beta > 0.0) || !(out.z_2beta > 0.0)) {
        throw numeric_error("evaluate_ensemble: partition function vanished");
    }
    if (with_gradients) {
        out.mean_grad_beta.resize(n);
        out.mean_grad_2beta.resize(n);
        std::vector<double> cx(rows);
        std::vector<double> cy(rows);
        std::vector<double> cz(rows);
        auto reduce = [&](auto member, std::size_t j) {
            for (std::size_t r = 0; r < rows; ++r) {
                const Vec3 &v = (partial[r].*member)[j];
                cx[r] = v.x;
                cy[r] = v.y;
                cz[r] = v.z;
            }
            return Vec3{pairwise_sum(cx), pairwise_sum(cy), pairwise_sum(cz)};
        };
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3 g1 = (1.0 / out.z_beta) * reduce(&Partial::g1, j);
            const Vec3 g2 = (1.0 / out.z_2beta) * reduce(&Partial::g2, j);
            out.mean_grad_beta[j] = tangential(frame.from_frame(g1), points[j]);
            out.mean_grad_2beta[j] = tangential(frame.from_frame(g2), points[j]);
        }
    }
    return out;
}

/// 1 - Z_beta^2 / Z_{2 beta} at the given configuration; the error estimate is
/// the change against the half-resolution rule.
inline DiscrepancyReport sphere_discrepancy(const SphereConfiguration &config, double beta,
                                            const SphereQuadrature &quad, unsigned threads = 1)
{
    const EnsembleEvaluation fine = evaluate_ensemble(config, beta, quad, false, threads);
    const EnsembleEvaluation coarse = evaluate_ensemble(config, beta, quad.halved(), false, threads);
    DiscrepancyReport r = make_discrepancy_report(fine.z_beta, fine.z_2beta);
    r.error_estimate = std::abs(r.rho - (1.0 - coarse.z_beta * coarse.z_beta / coarse.z_2beta));
    return r;
}

/// max_j |E^beta[g_j] - E^{2 beta}[g_j]| with g_j projected on the tangent plane at p_j.
inline double equilibrium_residual(const SphereConfiguration &config, double beta, const SphereQuadrature &quad,
                                   unsigned threads = 1)
{
    return evaluate_ensemble(config, beta, quad, true, threads).residual();
}

/// beta^2 / (2 + beta)^2: one point.
inline double rho1_closed(double beta)
{
    detail::require(beta > 0.0 && std::isfinite(beta), "rho1_closed: beta must be positive");
    return beta * beta / ((2.0 + beta) * (2.0 + beta));
}

/// 1 - 2^{-4 beta} pi^2 Gamma(2 + 2 beta) / ((1 + beta)^2 Gamma((1 + beta)/2)^4): two antipodal points.
inline double rho2_closed(double beta)
{
    detail::require(beta > 0.0 && beta <= 30.0, "rho2_closed: beta must lie in (0, 30]");
    const double g = gamma_real(0.5 * (1.0 + beta));
    const double g2 = g * g;
    return 1.0 - std::exp2(-4.0 * beta) * pi * pi * gamma_real(2.0 + 2.0 * beta) / ((1.0 + beta) * (1.0 + beta) * g2 * g2);
}

struct FlowTraceRow
{
    int iter = 0;
    double objective = 0.0;
    double residual = 0.0;
};

struct FlowResult
{
    SphereConfiguration config;
    std::vector<FlowTraceRow> trace;
    int iterations = 0;
    bool converged = false;
    /// Backtracking could not find an ascent step before the step size underflowed.
    bool stalled = false;
};

struct FlowOptions
{
    double step = 0.5;
    int max_iters = 500;
    double tol = 1e-9;
    unsigned threads = 1;
};

/// n points drawn uniformly on the sphere.
inline SphereConfiguration random_configuration(int n, RngStream &rng)
{
    detail::require(n >= 1, "random_configuration: n must be positive");
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    while (pts.size() < static_cast<std::size_t>(n)) {
        const Vec3 g{rng.normal(1.0), rng.normal(1.0), rng.normal(1.0)};
        if (norm(g) < 1e-6) {
            continue;
        }
        pts.push_back(normalized(g));
    }
    return SphereConfiguration(std::move(pts));
}

/// Gradient ascent of log(Z_beta^2 / Z_{2 beta}) from a given configuration.
/// Each point moves along 2 beta (E^beta g_j - E^{2 beta} g_j) and is projected
/// back to the sphere. A step that lowers the objective is halved and retried;
/// an accepted step grows the next trial step by 5/4.
inline FlowResult gradient_flow(SphereConfiguration start, double beta, const FlowOptions &opts,
                                const SphereQuadrature &quad)
{
    detail::require(beta > 0.0 && std::isfinite(beta), "gradient_flow: beta must be positive");
    detail::require(opts.step > 0.0 && std::isfinite(opts.step), "gradient_flow: step must be positive");
    detail::require(opts.max_iters >= 0, "gradient_flow: max_iters must be nonnegative");
    detail::require(opts.tol >= 0.0, "gradient_flow: tol must be nonnegative");

    FlowResult result{std::move(start), {}, 0, false, false};
    double step = opts.step;
    EnsembleEvaluation eval = evaluate_ensemble(result.config, beta, quad, true, opts.threads);
    for (int iter = 0;; ++iter) {
        const double objective = eval.objective();
        const double residual = eval.residual();
        result.trace.push_back({iter, objective, residual});
        result.iterations = iter;
        if (residual < opts.tol) {
            result.converged = true;
            break;
        }
        if (iter >= opts.max_iters) {
            break;
        }
        const auto &points = result.config.points();
        bool accepted = false;
        while (!accepted) {
            std::vector<SpherePoint> trial(points.size());
            for (std::size_t j = 0; j < points.size(); ++j) {
                trial[j] = normalized(points[j] + step * eval.ascent(j, beta));
            }
            double closest = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < trial.size(); ++i) {
                for (std::size_t j = i + 1; j < trial.size(); ++j) {
                    closest = std::min(closest, norm(trial[i] - trial[j]));
                }
            }
            if (closest <= SphereConfiguration::min_separation) {
                throw numeric_error("gradient_flow: step collapse, two points merged");
            }
            SphereConfiguration candidate(std::move(trial));
            const EnsembleEvaluation trial_eval = evaluate_ensemble(candidate, beta, quad, false, opts.threads);
            if (trial_eval.objective() >= objective) {
                result.config = std::move(candidate);
                step *= 1.25;
                accepted = true;
            } else {
                step *= 0.5;
                if (step < 1e-14) {
                    break;
                }
            }
        }
        if (!accepted) {
            result.stalled = true;
            break;
        }
        eval = evaluate_ensemble(result.config, beta, quad, true, opts.threads);
    }
    return result;
}

/// Flow from n uniformly random points drawn from rng.
inline FlowResult gradient_flow(int n, double beta, RngStream &rng, const FlowOptions &opts,
                                const SphereQuadrature &quad)
{
    return gradient_flow(random_configuration(n, rng), beta, opts, quad);
}

} // namespace zeropack
