#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <zeropack/fock.hpp>

#include "oracles.hpp"

using namespace zeropack;

namespace
{

// g_m = (1/m!) int f^2 conj(f) conj(w)^m e^{-2|w|^2} dA(w).
Complex oracle_coefficient(const std::vector<Complex> &c, int m)
{
    const Complex v = oracle::fock_weighted_integral([&](Complex w) {
        const Complex f = oracle::polyval(c, w);
        return f * f * std::conj(f) * std::pow(std::conj(w), m);
    });
    return v / std::tgamma(m + 1.0);
}

} // namespace

TEST(Fock, NormOfMonomials)
{
    for (int k : {0, 1, 3, 7}) {
        FockPolynomial f;
        f.coeffs.assign(static_cast<std::size_t>(k) + 1, Complex(0.0));
        f.coeffs.back() = 1.0;
        EXPECT_NEAR(fock_norm(f), std::sqrt(std::tgamma(k + 1.0)), 1e-12);
    }
}

TEST(Fock, IdentityIsFixedAtQuarter)
{
    const FockPolynomial f{{0.0, 1.0}};
    const FockPolynomial g = cubic_projection(f);
    ASSERT_EQ(g.degree(), 2u);
    EXPECT_NEAR(std::abs(g.coeffs[1] - 0.25), 0.0, 1e-15);
    EXPECT_EQ(g.coeffs[0], Complex(0.0));
    EXPECT_EQ(g.coeffs[2], Complex(0.0));
    EXPECT_LT(stationary_residual(f, 0.25), 1e-14);
}

TEST(Fock, ConstantFixedPoint)
{
    // P(c) = c |c|^2 / 2, so |c|^2 = 2 omega.
    for (double omega : {0.1, 0.5, 2.0}) {
        const FockPolynomial f{{Complex(std::sqrt(2.0 * omega), 0.0) * std::polar(1.0, 0.7)}};
        EXPECT_LT(stationary_residual(f, omega), 1e-12) << omega;
    }
}

TEST(Fock, MatchesGaussianQuadratureOracle)
{
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 3; ++trial) {
        const std::vector<Complex> c = oracle::random_coefficients(gen, 3, 0.6);
        const FockPolynomial g = cubic_projection(FockPolynomial{c});
        ASSERT_EQ(g.degree(), 6u);
        for (int m = 0; m <= 6; ++m) {
            EXPECT_LT(std::abs(g.coeffs[static_cast<std::size_t>(m)] - oracle_coefficient(c, m)), 1e-8)
                << "trial " << trial << " m " << m;
        }
    }
}

TEST(Fock, PhaseEquivarianceAndCubicScaling)
{
    std::mt19937_64 gen(4);
    const FockPolynomial f{oracle::random_coefficients(gen, 5)};
    const FockPolynomial g = cubic_projection(f);
    const Complex phase = std::polar(1.0, 1.1);
    const double lambda = 1.7;
    FockPolynomial h = f;
    for (Complex &c : h.coeffs) {
        c *= lambda * phase;
    }
    const FockPolynomial gh = cubic_projection(h);
    for (std::size_t m = 0; m < g.coeffs.size(); ++m) {
        const Complex expect = lambda * lambda * lambda * phase * g.coeffs[m];
        EXPECT_LT(std::abs(gh.coeffs[m] - expect), 1e-12 * (1.0 + std::abs(expect)));
    }
}

TEST(Fock, RotationMapsMonomialsToThemselves)
{
    // z^k maps to a multiple of z^k.
    for (int k = 0; k < 6; ++k) {
        FockPolynomial f;
        f.coeffs.assign(static_cast<std::size_t>(k) + 1, Complex(0.0));
        f.coeffs.back() = 1.0;
        const FockPolynomial g = cubic_projection(f);
        for (std::size_t m = 0; m < g.coeffs.size(); ++m) {
            if (m != static_cast<std::size_t>(k)) {
                EXPECT_EQ(g.coeffs[m], Complex(0.0));
            }
        }
        // (2k)! / (2^{2k+1} k!)
        EXPECT_NEAR(g.coeffs[static_cast<std::size_t>(k)].real(),
                    std::tgamma(2.0 * k + 1.0) / (std::pow(2.0, 2 * k + 1) * std::tgamma(k + 1.0)), 1e-12);
    }
}

TEST(Fock, ValidatesInput)
{
    EXPECT_THROW(cubic_projection(FockPolynomial{}), std::invalid_argument);
    FockPolynomial big;
    big.coeffs.assign(fock_default_degree_cap + 2, Complex(1.0));
    EXPECT_THROW(cubic_projection(big), std::invalid_argument);
    EXPECT_THROW(cubic_projection(FockPolynomial{{std::nan("")}}), std::invalid_argument);
    EXPECT_THROW(fixed_point_solve(FockPolynomial{{0.0}}, 1.0, 10, 1e-12), std::invalid_argument);
    EXPECT_THROW(fixed_point_solve(FockPolynomial{{1.0}}, 0.0, 10, 1e-12), std::invalid_argument);
}

TEST(Fock, FixedPointFromMonomialIsImmediate)
{
    // z already has unit Fock norm.
    const FixedPointResult r = fixed_point_solve(FockPolynomial{{0.0, 1.0}}, 0.25, 10, 1e-13);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.residual_history.size(), 1u);
}

TEST(Fock, FixedPointHistoryAlwaysReturned)
{
    std::mt19937_64 gen(9);
    const FixedPointResult r = fixed_point_solve(FockPolynomial{oracle::random_coefficients(gen, 3)}, 0.3, 20, 0.0);
    EXPECT_FALSE(r.residual_history.empty());
    EXPECT_LE(r.solution.degree(), fock_default_degree_cap);
    EXPECT_NEAR(fock_norm(r.solution), 1.0, 1e-12);
}
