#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <zeropack/weierstrass.hpp>

#include "oracles.hpp"

using namespace zeropack;

namespace
{

Complex equilateral_alpha() { return 0.5 * std::sqrt(pi) / std::pow(3.0, 0.25); }

WeierstrassContext equilateral()
{
    const Complex a = equilateral_alpha();
    return WeierstrassContext(a, a * std::polar(1.0, pi / 3.0));
}

WeierstrassContext square() { return WeierstrassContext(1.0, Complex(0.0, 1.0)); }

// Lattice sum 1/z + sum_{0 < |w| <= R} (1/(z-w) + 1/w + z/w^2).
Complex zeta_sum(Complex o1, Complex o2, Complex z, double radius)
{
    Complex acc = 1.0 / z;
    const int reach = static_cast<int>(radius / std::abs(o1)) + 2;
    for (int m = -reach; m <= reach; ++m) {
        for (int n = -reach; n <= reach; ++n) {
            if (m == 0 && n == 0) {
                continue;
            }
            const Complex w = 2.0 * static_cast<double>(m) * o1 + 2.0 * static_cast<double>(n) * o2;
            if (std::abs(w) <= radius) {
                acc += 1.0 / (z - w) + 1.0 / w + z / (w * w);
            }
        }
    }
    return acc;
}

} // namespace

TEST(Weierstrass, SquareLatticeEta)
{
    const WeierstrassContext ctx = square();
    EXPECT_NEAR(ctx.eta1().real(), pi / 4.0, 1e-14);
    EXPECT_NEAR(ctx.eta1().imag(), 0.0, 1e-14);
    // Legendre with omega2 = i omega1 and the square symmetry: eta2 = -i eta1.
    EXPECT_NEAR(std::abs(ctx.eta2() - Complex(0.0, -pi / 4.0)), 0.0, 1e-13);
}

TEST(Weierstrass, EquilateralEta)
{
    const WeierstrassContext ctx = equilateral();
    const double a = equilateral_alpha().real();
    EXPECT_NEAR(std::abs(ctx.eta1() - pi / (2.0 * std::sqrt(3.0) * a)), 0.0, 1e-13);
}

TEST(Weierstrass, LegendreRelation)
{
    EXPECT_LT(square().legendre_residual(), 1e-12);
    EXPECT_LT(equilateral().legendre_residual(), 1e-12);
    const WeierstrassContext skew(Complex(0.7, 0.1), Complex(0.3, 1.9));
    EXPECT_LT(skew.legendre_residual(), 1e-12);
}

TEST(Weierstrass, DegenerateLatticeRejected)
{
    EXPECT_THROW(WeierstrassContext(1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(WeierstrassContext(Complex(0.0, 1.0), 1.0), std::invalid_argument);
    EXPECT_THROW(WeierstrassContext(0.0, Complex(0.0, 1.0)), std::invalid_argument);
}

TEST(Weierstrass, QuasiPeriodicity)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const WeierstrassContext &ctx : {square(), equilateral()}) {
        for (int i = 0; i < 100; ++i) {
            const Complex z(u(gen), u(gen));
            EXPECT_LT(ctx.quasi_period_residual(z, 1), 1e-10) << z;
            EXPECT_LT(ctx.quasi_period_residual(z, 2), 1e-10) << z;
        }
    }
}

TEST(Weierstrass, ProductOracleEquilateral)
{
    const WeierstrassContext ctx = equilateral();
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int i = 0; i < 20; ++i) {
        const Complex z(u(gen), u(gen));
        const Complex expect = oracle::sigma_product(ctx.omega1(), ctx.omega2(), z, 40.0);
        EXPECT_LT(std::abs(ctx.sigma(z) - expect), 1e-8 * std::max(1.0, std::abs(expect))) << z;
    }
}

TEST(Weierstrass, ProductOracleSquare)
{
    const WeierstrassContext ctx = square();
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 10; ++i) {
        const Complex z(u(gen), u(gen));
        const Complex expect = oracle::sigma_product(ctx.omega1(), ctx.omega2(), z, 160.0);
        EXPECT_LT(std::abs(ctx.sigma(z) - expect), 1e-8) << z;
    }
}

TEST(Weierstrass, ProductOracleAwayFromCell)
{
    // Argument reduction: points several periods from the origin.
    const WeierstrassContext ctx = equilateral();
    for (const Complex z : {Complex(2.3, 1.1), Complex(-3.1, 0.4), Complex(0.2, -2.7)}) {
        const Complex expect = oracle::sigma_product(ctx.omega1(), ctx.omega2(), z, 150.0);
        EXPECT_LT(std::abs(ctx.sigma(z) - expect) / std::abs(expect), 1e-8) << z;
    }
}

TEST(Weierstrass, ZetaLatticeSum)
{
    const WeierstrassContext ctx = equilateral();
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 10; ++i) {
        const Complex z(u(gen), u(gen));
        const Complex expect = zeta_sum(ctx.omega1(), ctx.omega2(), z, 60.0);
        EXPECT_LT(std::abs(ctx.zeta(z) - expect), 1e-8) << z;
    }
}

TEST(Weierstrass, ZetaIsLogDerivativeOfSigma)
{
    const WeierstrassContext ctx(Complex(0.8, 0.0), Complex(0.25, 0.9));
    const double h = 1e-5;
    for (const Complex z : {Complex(0.3, 0.2), Complex(-1.4, 0.9), Complex(2.2, -1.7)}) {
        const Complex fd = (std::log(ctx.sigma(z + h)) - std::log(ctx.sigma(z - h))) / (2.0 * h);
        EXPECT_LT(std::abs(fd - ctx.zeta(z)), 1e-7 * std::max(1.0, std::abs(fd))) << z;
    }
}

TEST(Weierstrass, ZetaAtHalfPeriods)
{
    const WeierstrassContext ctx = equilateral();
    EXPECT_LT(std::abs(ctx.zeta(ctx.omega1()) - ctx.eta1()), 1e-12);
    EXPECT_LT(std::abs(ctx.zeta(ctx.omega2()) - ctx.eta2()), 1e-12);
    EXPECT_THROW(ctx.zeta(0.0), numeric_error);
    EXPECT_THROW(ctx.zeta(2.0 * ctx.omega1()), numeric_error);
}

TEST(Weierstrass, OddAndNormalizedAtOrigin)
{
    const WeierstrassContext ctx = equilateral();
    for (const Complex z : {Complex(0.1, 0.05), Complex(0.6, -0.3), Complex(1.7, 2.1)}) {
        EXPECT_LT(std::abs(ctx.sigma(-z) + ctx.sigma(z)), 1e-12 * std::max(1.0, std::abs(ctx.sigma(z))));
    }
    const Complex tiny(1e-6, 2e-6);
    EXPECT_LT(std::abs(ctx.sigma(tiny) / tiny - 1.0), 1e-12);
}

TEST(Weierstrass, ZerosExactlyAtLatticePoints)
{
    const WeierstrassContext ctx = equilateral();
    EXPECT_EQ(ctx.log_abs_sigma(0.0), -std::numeric_limits<double>::infinity());
    const Complex w = 2.0 * ctx.omega1() - 4.0 * ctx.omega2();
    EXPECT_LT(std::abs(ctx.sigma(w)), 1e-10);
    EXPECT_TRUE(std::isfinite(ctx.log_abs_sigma(w + Complex(1e-3, 0.0))));
}

TEST(Weierstrass, LogAbsSigmaFarFromOrigin)
{
    const WeierstrassContext ctx = equilateral();
    const Complex z(40.3, -27.9);
    const double direct = ctx.log_abs_sigma(z);
    EXPECT_TRUE(std::isfinite(direct));
    // sigma itself overflows out here; check the log against the quasi-period law.
    const Complex p = 2.0 * ctx.omega1();
    const double step = ctx.log_abs_sigma(z + p) - direct;
    const double predicted = (2.0 * (z + ctx.omega1()) * ctx.eta1()).real();
    EXPECT_NEAR(step, predicted, 1e-8 * std::abs(predicted));
}
