#pragma once

#include <functional>
#include <vector>

#include "pphi/rng.hpp"

namespace pphi {

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    size_t count = 0;
};

MeanSE mean_se(const std::vector<double>& xs);

/// Percentile bootstrap confidence half-width for a statistic of an i.i.d.
/// sample (level two-sided; default 95%).
double bootstrap_halfwidth(const std::vector<double>& xs,
                           const std::function<double(const std::vector<double>&)>& stat,
                           uint64_t seed, int resamples = 400, double level = 0.95);

/// log( mean(exp(ls)) ) computed with max-subtraction.
double log_mean_exp(const std::vector<double>& ls);

/// Effective sample size of the exponentiated weights, (sum w)^2 / sum w^2.
double effective_sample_size_log_weights(const std::vector<double>& ls);

/// Kolmogorov-Smirnov distance between the empirical law of xs and a CDF.
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf);

/// Two-sample KS test p-value (asymptotic Kolmogorov distribution).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/// Effective sample size of a stationary series via the initial positive
/// sequence estimator on the autocorrelation function.
double ess_autocorrelation(const std::vector<double>& series);

}  // namespace pphi
