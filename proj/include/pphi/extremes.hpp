#pragma once

#include <vector>

#include "pphi/field.hpp"

namespace pphi {

/// Deterministic centering m_eps = (2 log(1/eps) - (3/4) log log(1/eps)) / sqrt(2 pi).
/// Requires eps < 1/e.
double m_eps(double epsilon);

struct MaxRecord {
    double epsilon = 0.0;
    double raw_max = 0.0;
    double centering = 0.0;
    double centered = 0.0;
    double z_statistic = 0.0;  // filled by derivative_martingale when requested
};

/// Max over sites minus m_eps (z_statistic left at 0).
MaxRecord centered_max(const RealField& f);

/// Derivative-martingale statistic
/// Z = eps^2 sum_x ((2/sqrt(2 pi)) log(1/eps) - f(x)) exp(-2 log(1/eps) + sqrt(8 pi) f(x)).
double derivative_martingale(const RealField& f, double epsilon);

struct GumbelFit {
    double location = 0.0;  // mu
    double scale = 0.0;     // beta
    double ks_distance = 0.0;
    double log_likelihood = 0.0;
};

/// Maximum-likelihood Gumbel fit via the one-dimensional profile equation,
/// solved by bisection to 1e-10. Requires >= 50 samples, not all equal.
GumbelFit gumbel_fit(const std::vector<double>& samples);

double gumbel_cdf(double x, double mu, double beta);

/// Inverse CDF sampling of Gumbel(mu, beta) from a uniform in (0,1).
double gumbel_quantile(double u, double mu, double beta);

/// Log-likelihood gain of the best two-component location mixture of Gumbels
/// (shared scale, EM from a symmetric split) over the single-Gumbel MLE.
/// Positive values flag a randomly-shifted structure.
double gumbel_mixture_gain(const std::vector<double>& samples);

}  // namespace pphi
