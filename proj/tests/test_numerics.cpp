#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include <zeropack/numerics.hpp>
#include <zeropack/parallel.hpp>
#include <zeropack/report.hpp>
#include <zeropack/series.hpp>

using namespace zeropack;

TEST(Gamma, MatchesStdTgamma)
{
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.5, 60.0, 120.0, 169.5}) {
        EXPECT_NEAR(gamma_real(x) / std::tgamma(x), 1.0, 1e-13) << x;
    }
}

TEST(Gamma, HalfIntegerValues)
{
    EXPECT_NEAR(gamma_real(0.5), sqrt_pi, 1e-14);
    EXPECT_NEAR(gamma_real(1.5), 0.5 * sqrt_pi, 1e-14);
    EXPECT_DOUBLE_EQ(gamma_real(1.0), 1.0);
    EXPECT_NEAR(gamma_real(5.0), 24.0, 1e-12);
}

TEST(Gamma, RejectsOutOfRange)
{
    EXPECT_THROW(gamma_real(0.0), std::domain_error);
    EXPECT_THROW(gamma_real(-1.0), std::domain_error);
    EXPECT_THROW(gamma_real(171.0), std::domain_error);
}

TEST(GaussLegendre, ExactOnPolynomials)
{
    for (int n : {1, 2, 3, 5, 8, 33}) {
        const QuadratureRule1D rule = gauss_legendre(n, -0.5, 2.0);
        for (int k = 0; k < 2 * n; ++k) {
            const double exact = (std::pow(2.0, k + 1) - std::pow(-0.5, k + 1)) / (k + 1);
            const double got = rule.integrate([k](double x) { return std::pow(x, k); });
            EXPECT_NEAR(got, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "n=" << n << " k=" << k;
        }
    }
}

TEST(GaussLegendre, NodesInsideIntervalAndSymmetric)
{
    const QuadratureRule1D rule = gauss_legendre(64, 0.0, 1.0);
    ASSERT_EQ(rule.size(), 64u);
    double wsum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        EXPECT_GT(rule.nodes[i], 0.0);
        EXPECT_LT(rule.nodes[i], 1.0);
        EXPECT_GT(rule.weights[i], 0.0);
        EXPECT_NEAR(rule.nodes[i] + rule.nodes[rule.size() - 1 - i], 1.0, 1e-15);
        wsum += rule.weights[i];
    }
    EXPECT_NEAR(wsum, 1.0, 1e-14);
}

TEST(GaussLegendre, SmoothIntegrand)
{
    const QuadratureRule1D rule = gauss_legendre(40, 0.0, pi);
    EXPECT_NEAR(rule.integrate([](double x) { return std::sin(x); }), 2.0, 1e-14);
}

TEST(RngStream, SameSeedAndStreamReproduce)
{
    RngStream a(42, 3);
    RngStream b(42, 3);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.normal(1.0), b.normal(1.0));
    }
}

TEST(RngStream, DistinctStreamsDiffer)
{
    std::set<double> firsts;
    for (std::uint64_t s = 0; s < 64; ++s) {
        RngStream r(7, s);
        firsts.insert(r.uniform());
    }
    EXPECT_EQ(firsts.size(), 64u);
    RngStream x(1, 0);
    RngStream y(2, 0);
    EXPECT_NE(x.uniform(), y.uniform());
}

TEST(RngStream, SubstreamMatchesDirectConstruction)
{
    RngStream base(99, 0);
    RngStream sub = base.substream(5);
    RngStream direct(99, 5);
    EXPECT_EQ(sub.seed(), 99u);
    EXPECT_EQ(sub.stream_index(), 5u);
    EXPECT_EQ(sub.uniform(), direct.uniform());
}

TEST(RngStream, ComplexGaussianHasUnitVariance)
{
    RngStream r(2024, 0);
    const int n = 200000;
    double m2 = 0.0;
    double m4 = 0.0;
    Complex mean(0.0);
    for (int i = 0; i < n; ++i) {
        const Complex z = sample_standard_complex_gaussian(r);
        mean += z;
        m2 += std::norm(z);
        m4 += std::norm(z) * std::norm(z);
    }
    EXPECT_NEAR(m2 / n, 1.0, 0.01);
    // E|z|^4 = 2 for a standard complex Gaussian.
    EXPECT_NEAR(m4 / n, 2.0, 0.04);
    EXPECT_LT(std::abs(mean / static_cast<double>(n)), 0.01);
}

TEST(Parallel, EveryBlockVisitedOnce)
{
    for (unsigned threads : {1u, 2u, 3u, 8u}) {
        std::vector<int> hits(37, 0);
        parallel_for_blocks(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) {
            EXPECT_EQ(h, 1);
        }
    }
}

TEST(Parallel, ExceptionsPropagate)
{
    EXPECT_THROW(parallel_for_blocks(10, 4,
                                     [](std::size_t i) {
                                         if (i == 7) {
                                             throw std::runtime_error("boom");
                                         }
                                     }),
                 std::runtime_error);
}

TEST(Parallel, PairwiseSumAccurate)
{
    std::vector<double> v(100001, 0.1);
    EXPECT_NEAR(pairwise_sum(v), 10000.1, 1e-9);
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Report, DiscrepancyFromMoments)
{
    const DiscrepancyReport r = make_discrepancy_report(2.0, 5.0);
    EXPECT_DOUBLE_EQ(r.rho, 1.0 - 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(r.b_opt, 0.4);
    EXPECT_THROW(make_discrepancy_report(0.0, 1.0), numeric_error);
    EXPECT_THROW(make_discrepancy_report(1.0, std::nan("")), numeric_error);
}

TEST(Report, TrialSummary)
{
    const McEstimate e = summarize_trials({1.0, 2.0, 3.0, 4.0}, 9);
    EXPECT_DOUBLE_EQ(e.mean, 2.5);
    EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
    EXPECT_EQ(e.truncation, 9);
    EXPECT_THROW(summarize_trials({1.0}, 1), std::invalid_argument);
}

TEST(Series, HornerAndDerivative)
{
    const std::vector<Complex> c{{1, 0}, {0, 2}, {-3, 1}};
    const Complex z(0.3, -0.7);
    EXPECT_LT(std::abs(horner(c, z) - (c[0] + c[1] * z + c[2] * z * z)), 1e-15);
    EXPECT_LT(std::abs(horner_derivative(c, z) - (c[1] + 2.0 * c[2] * z)), 1e-15);
}
