#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace zeropack
{

/// Optimal-amplitude discrepancy built from the two moments
/// m1 = <W>, m2 = <W^2> of a nonnegative weight W. Minimizing <(bW - 1)^2>
/// over b gives b_opt = m1/m2 and rho = 1 - m1^2/m2.
struct DiscrepancyReport
{
    double m1 = 0.0;
    double m2 = 0.0;
    double rho = 0.0;
    double b_opt = 0.0;
    double error_estimate = 0.0;
};

inline DiscrepancyReport make_discrepancy_report(double m1, double m2, double error_estimate = 0.0)
{
    if (!(m1 > 0.0) || !(m2 > 0.0) || !std::isfinite(m1) || !std::isfinite(m2)) {
        throw numeric_error("discrepancy report: moments must be positive and finite");
    }
    DiscrepancyReport r;
    r.m1 = m1;
    r.m2 = m2;
    r.rho = 1.0 - m1 * m1 / m2;
    r.b_opt = m1 / m2;
    r.error_estimate = error_estimate;
    return r;
}

/// Mean and standard error of a set of independent Monte Carlo trials.
struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    int truncation = 0;
    std::vector<double> samples;
};

inline McEstimate summarize_trials(std::vector<double> samples, int truncation)
{
    if (samples.size() < 2) {
        throw std::invalid_argument("Monte Carlo: need at least two trials");
    }
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : samples) {
        ss += (s - mean) * (s - mean);
    }
    McEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
    est.truncation = truncation;
    est.samples = std::move(samples);
    return est;
}

} // namespace zeropack
