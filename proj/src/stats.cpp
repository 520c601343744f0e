#include "pphi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pphi {

MeanSE mean_se(const std::vector<double>& xs) {
    MeanSE r;
    r.count = xs.size();
    if (xs.empty()) return r;
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    r.mean = m;
    r.se = xs.size() > 1 ? std::sqrt(v / (xs.size() - 1.0) / xs.size()) : 0.0;
    return r;
}

double bootstrap_halfwidth(const std::vector<double>& xs,
                           const std::function<double(const std::vector<double>&)>& stat,
                           uint64_t seed, int resamples, double level) {
    if (xs.empty()) throw std::invalid_argument("bootstrap_halfwidth: empty sample");
    CounterRng rng(derive_seed(seed, {"bootstrap"}));
    std::vector<double> stats(resamples);
    std::vector<double> draw(xs.size());
    for (int b = 0; b < resamples; ++b) {
        for (size_t i = 0; i < xs.size(); ++i)
            draw[i] = xs[static_cast<size_t>(rng.next_uniform() * xs.size()) % xs.size()];
        stats[b] = stat(draw);
    }
    std::sort(stats.begin(), stats.end());
    const double tail = 0.5 * (1.0 - level);
    const auto lo = static_cast<size_t>(tail * (resamples - 1));
    const auto hi = static_cast<size_t>((1.0 - tail) * (resamples - 1));
    return 0.5 * (stats[hi] - stats[lo]);
}

double log_mean_exp(const std::vector<double>& ls) {
    if (ls.empty()) throw std::invalid_argument("log_mean_exp: empty sample");
    const double m = *std::max_element(ls.begin(), ls.end());
    double s = 0.0;
    for (double l : ls) s += std::exp(l - m);
    return m + std::log(s / ls.size());
}

double effective_sample_size_log_weights(const std::vector<double>& ls) {
    if (ls.empty()) return 0.0;
    const double m = *std::max_element(ls.begin(), ls.end());
    double s1 = 0.0, s2 = 0.0;
    for (double l : ls) {
        const double w = std::exp(l - m);
        s1 += w;
        s2 += w * w;
    }
    return s1 * s1 / s2;
}

double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double c = cdf(xs[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

namespace {

double kolmogorov_sf(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double s = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        s += (j % 2 == 1 ? term : -term);
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

}  // namespace

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample_pvalue: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    return kolmogorov_sf(lambda);
}

double ess_autocorrelation(const std::vector<double>& series) {
    const size_t n = series.size();
    if (n < 4) return static_cast<double>(n);
    double m = 0.0;
    for (double x : series) m += x;
    m /= n;
    std::vector<double> centered(n);
    for (size_t i = 0; i < n; ++i) centered[i] = series[i] - m;
    double c0 = 0.0;
    for (double x : centered) c0 += x * x;
    c0 /= n;
    if (c0 <= 0.0) return static_cast<double>(n);
    // Geyer initial positive sequence: sum pairs of autocorrelations while
    // the pair sums stay positive.
    double tau = 1.0;
    for (size_t lag = 1; lag + 1 < n; lag += 2) {
        double r1 = 0.0, r2 = 0.0;
        for (size_t i = 0; i + lag < n; ++i) r1 += centered[i] * centered[i + lag];
        for (size_t i = 0; i + lag + 1 < n; ++i) r2 += centered[i] * centered[i + lag + 1];
        r1 /= n * c0;
        r2 /= n * c0;
        const double pair = r1 + r2;
        if (pair <= 0.0) break;
        tau += 2.0 * pair;
    }
    return static_cast<double>(n) / tau;
}

}  // namespace pphi
