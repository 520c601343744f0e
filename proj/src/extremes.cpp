#include "pphi/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pphi/stats.hpp"

namespace pphi {

double m_eps(double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= std::exp(-1.0))
        throw std::domain_error("m_eps: requires 0 < eps < 1/e");
    const double l = std::log(1.0 / epsilon);
    return (2.0 * l - 0.75 * std::log(l)) / std::sqrt(2.0 * M_PI);
}

MaxRecord centered_max(const RealField& f) {
    MaxRecord r;
    r.epsilon = f.geom.epsilon();
    r.raw_max = *std::max_element(f.values.begin(), f.values.end());
    r.centering = m_eps(r.epsilon);
    r.centered = r.raw_max - r.centering;
    return r;
}

double derivative_martingale(const RealField& f, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("derivative_martingale: requires eps in (0,1)");
    const double l = std::log(1.0 / epsilon);
    const double pref = 2.0 / std::sqrt(2.0 * M_PI) * l;
    const double c = std::sqrt(8.0 * M_PI);
    double s = 0.0;
    for (double v : f.values) s += (pref - v) * std::exp(-2.0 * l + c * v);
    return s * epsilon * epsilon;
}

double gumbel_cdf(double x, double mu, double beta) {
    return std::exp(-std::exp(-(x - mu) / beta));
}

double gumbel_quantile(double u, double mu, double beta) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("gumbel_quantile: u in (0,1)");
    return mu - beta * std::log(-std::log(u));
}

namespace {

// Weighted mean of x under weights exp(-x/beta), max-subtracted.
double exp_weighted_mean(const std::vector<double>& xs, double beta) {
    const double m = *std::min_element(xs.begin(), xs.end());
    double sw = 0.0, swx = 0.0;
    for (double x : xs) {
        const double w = std::exp((m - x) / beta);
        sw += w;
        swx += w * x;
    }
    return swx / sw;
}

double gumbel_loglik(const std::vector<double>& xs, double mu, double beta) {
    double ll = 0.0;
    for (double x : xs) {
        const double z = (x - mu) / beta;
        ll += -std::log(beta) - z - std::exp(-z);
    }
    return ll;
}

}  // namespace

GumbelFit gumbel_fit(const std::vector<double>& samples) {
    if (samples.size() < 50)
        throw std::invalid_argument("gumbel_fit: need at least 50 samples");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    if (*mn == *mx) throw std::invalid_argument("gumbel_fit: degenerate sample (all equal)");

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= samples.size();

    // Profile equation g(beta) = beta - mean + weighted_mean(beta) = 0,
    // increasing in beta; bracket then bisect.
    auto g = [&](double beta) { return beta - mean + exp_weighted_mean(samples, beta); };
    double hi = std::max(*mx - *mn, 1e-6);
    while (g(hi) < 0.0) hi *= 2.0;
    double lo = hi;
    while (g(lo) > 0.0 && lo > 1e-280) lo *= 0.5;
    for (int it = 0; it < 300 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }

    GumbelFit fit;
    fit.scale = 0.5 * (lo + hi);
    double sw = 0.0;
    const double m = *mn;
    for (double x : samples) sw += std::exp((m - x) / fit.scale);
    fit.location = m + fit.scale * std::log(samples.size() / sw);
    fit.log_likelihood = gumbel_loglik(samples, fit.location, fit.scale);
    fit.ks_distance = ks_distance(
        samples, [&](double x) { return gumbel_cdf(x, fit.location, fit.scale); });
    return fit;
}

double gumbel_mixture_gain(const std::vector<double>& samples) {
    const GumbelFit base = gumbel_fit(samples);
    const double beta = base.scale;

    // EM over (w, mu1, mu2) with the scale frozen at the single-fit value.
    double w = 0.5;
    double mu1 = base.location - beta;
    double mu2 = base.location + 0.5 * beta;
    const size_t n = samples.size();
    std::vector<double> resp(n);
    for (int it = 0; it < 300; ++it) {
        for (size_t i = 0; i < n; ++i) {
            const double z1 = (samples[i] - mu1) / beta;
            const double z2 = (samples[i] - mu2) / beta;
            const double l1 = std::log(w) - z1 - std::exp(-z1);
            const double l2 = std::log(1.0 - w) - z2 - std::exp(-z2);
            const double mx = std::max(l1, l2);
            resp[i] = std::exp(l1 - mx) / (std::exp(l1 - mx) + std::exp(l2 - mx));
        }
        double sr = 0.0;
        for (double r : resp) sr += r;
        w = std::clamp(sr / n, 1e-6, 1.0 - 1e-6);
        // Weighted location MLE at fixed scale: mu = -beta log(sum r e^{-x/beta}/sum r)
        const double m = *std::min_element(samples.begin(), samples.end());
        double s1 = 0.0, s2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double e = std::exp((m - samples[i]) / beta);
            s1 += resp[i] * e;
            s2 += (1.0 - resp[i]) * e;
        }
        mu1 = m + beta * std::log(sr / s1);
        mu2 = m + beta * std::log((n - sr) / s2);
    }

    double ll = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double z1 = (samples[i] - mu1) / beta;
        const double z2 = (samples[i] - mu2) / beta;
        const double l1 = std::log(w) - std::log(beta) - z1 - std::exp(-z1);
        const double l2 = std::log(1.0 - w) - std::log(beta) - z2 - std::exp(-z2);
        const double mx = std::max(l1, l2);
        ll += mx + std::log(std::exp(l1 - mx) + std::exp(l2 - mx));
    }
    return ll - base.log_likelihood;
}

}  // namespace pphi
