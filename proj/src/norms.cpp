#include "pphi/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pphi/fft.hpp"
#include "pphi/spectral.hpp"

namespace pphi {

namespace {

// C-infinity step: 1 for t <= 0, 0 for t >= 1.
double smooth_step_down(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    const double g0 = std::exp(-1.0 / t);
    const double g1 = std::exp(-1.0 / (1.0 - t));
    return g1 / (g0 + g1);
}

// theta(r): 1 for r <= 3/4, 0 for r >= 4/3, smooth monotone in between.
double theta(double r) {
    constexpr double inner = 0.75, outer = 4.0 / 3.0;
    return smooth_step_down((r - inner) / (outer - inner));
}

double max_norm_k(DualIndex k) {
    return 2.0 * M_PI * std::max(std::abs(k.k1), std::abs(k.k2));
}

}  // namespace

DyadicPartition::DyadicPartition(const LatticeGeometry& g) : geom(g) {
    const int n = g.n;
    const double pi_over_eps = M_PI * n;
    // Largest j with supp chi_j = {|k|_inf <= 4/3 * 2^j} inside the dual square.
    j_max = -1;
    while ((4.0 / 3.0) * std::pow(2.0, j_max + 1) <= pi_over_eps) ++j_max;

    const size_t sites = static_cast<size_t>(n) * n;
    blocks.assign(static_cast<size_t>(j_max + 2), std::vector<double>(sites, 0.0));
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) {
            const size_t i = static_cast<size_t>(m1) * n + m2;
            const double r = max_norm_k({fold_frequency(m1, n), fold_frequency(m2, n)});
            double acc = 0.0;
            // chi_{-1}(k) = theta(2r); chi_j = theta(r/2^j) - theta(r/2^(j-1)).
            blocks[0][i] = theta(2.0 * r);
            acc += blocks[0][i];
            for (int j = 0; j < j_max; ++j) {
                blocks[static_cast<size_t>(j) + 1][i] =
                    theta(r / std::pow(2.0, j)) - theta(r / std::pow(2.0, j - 1));
                acc += blocks[static_cast<size_t>(j) + 1][i];
            }
            blocks[static_cast<size_t>(j_max) + 1][i] = 1.0 - acc;  // complementation
        }
}

const std::vector<double>& DyadicPartition::block(int j) const {
    if (j < -1 || j > j_max) throw std::out_of_range("DyadicPartition: block index");
    return blocks[static_cast<size_t>(j) + 1];
}

double lp_norm(const RealField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::abs(v), p);
    return std::pow(s / (static_cast<double>(f.geom.n) * f.geom.n), 1.0 / p);
}

double sobolev_norm(const RealField& f, double alpha) {
    const int n = f.geom.n;
    SpectralField g = forward_fft(f);
    double s = 0.0;
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) {
            const double ksq = ksq_continuum({fold_frequency(m1, n), fold_frequency(m2, n)});
            s += std::pow(1.0 + ksq, alpha) *
                 std::norm(g.coeffs[static_cast<size_t>(m1) * n + m2]);
        }
    return std::sqrt(s);
}

RealField lp_block(const RealField& f, int j, const DyadicPartition& partition) {
    if (f.geom.n != partition.geom.n)
        throw std::invalid_argument("lp_block: partition built for a different grid");
    const auto& w = partition.block(j);
    SpectralField g = forward_fft(f);
    for (size_t i = 0; i < g.coeffs.size(); ++i) g.coeffs[i] *= w[i];
    return inverse_fft(g);
}

double besov_norm(const RealField& f, double p, double q, double alpha,
                  const DyadicPartition& partition) {
    if (q < 1.0) throw std::invalid_argument("besov_norm: q must be >= 1");
    double acc = 0.0;
    for (int j = -1; j <= partition.j_max; ++j) {
        const double term = std::pow(2.0, alpha * j) * lp_norm(lp_block(f, j, partition), p);
        if (std::isinf(q))
            acc = std::max(acc, term);
        else
            acc += std::pow(term, q);
    }
    return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double holder_norm(const RealField& f, double alpha, int refine) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("holder_norm: alpha must be in (0,1)");
    if (refine < 2) throw std::invalid_argument("holder_norm: refine must be >= 2");
    const RealField fine = embed_trig(f, f.geom.n * refine);
    const int m = fine.geom.n;
    const double h = 1.0 / m;

    double sup = 0.0;
    // Organize by displacement: for each (d1, d2) take the max field
    // difference over sites, then divide by the torus distance once.
    for (int d1 = 0; d1 < m; ++d1) {
        for (int d2 = 0; d2 < m; ++d2) {
            if (d1 == 0 && d2 == 0) continue;
            const double w1 = std::min(d1, m - d1) * h;
            const double w2 = std::min(d2, m - d2) * h;
            const double dist = std::sqrt(w1 * w1 + w2 * w2);
            double maxdiff = 0.0;
            for (int i1 = 0; i1 < m; ++i1) {
                const int j1 = (i1 + d1) % m;
                const double* row = &fine.values[static_cast<size_t>(i1) * m];
                const double* srow = &fine.values[static_cast<size_t>(j1) * m];
                for (int i2 = 0; i2 < m; ++i2) {
                    const double diff = std::abs(row[i2] - srow[(i2 + d2) % m]);
                    if (diff > maxdiff) maxdiff = diff;
                }
            }
            sup = std::max(sup, maxdiff / std::pow(dist, alpha));
        }
    }
    return sup + lp_norm(fine, std::numeric_limits<double>::infinity());
}

}  // namespace pphi
