#include "pphi/scale_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pphi {

ScaleGrid::ScaleGrid(std::vector<double> ts) : times(std::move(ts)) {
    if (times.size() < 2 || !std::isinf(times.front()) || times.back() != 0.0)
        throw std::invalid_argument("ScaleGrid: need times inf = t_0 > ... > t_K = 0");
    for (size_t j = 0; j + 1 < times.size(); ++j)
        if (!(times[j] > times[j + 1]))
            throw std::invalid_argument("ScaleGrid: times must be strictly decreasing");
}

size_t ScaleGrid::index_of(double t) const {
    for (size_t j = 0; j < times.size(); ++j)
        if (times[j] == t) return j;
    throw std::out_of_range("ScaleGrid: time not on the grid");
}

namespace {

double tail_mass(const std::vector<double>& a, double t) {
    // sum_k (c_inf - c_t) = sum_k 1 / (a (t a + 1))
    double s = 0.0;
    for (double ai : a) s += 1.0 / (ai * (t * ai + 1.0));
    return s;
}

double head_mass(const std::vector<double>& a, double t) {
    double s = 0.0;
    for (double ai : a) s += pv_covariance_scalar(ai, t);
    return s;
}

}  // namespace

double default_t_max(const LatticeGeometry& geom, double frac) {
    const auto a = laplacian_plus_mass(geom);
    const double target = frac * variance_c_eps(geom);
    double lo = 1.0, hi = 1.0;
    while (tail_mass(a, hi) > target) hi *= 2.0;
    while (tail_mass(a, lo) <= target && lo > 1e-12) lo /= 2.0;
    for (int it = 0; it < 80; ++it) {
        double mid = std::sqrt(lo * hi);
        (tail_mass(a, mid) > target ? lo : hi) = mid;
    }
    return hi;
}

double default_t_min(const LatticeGeometry& geom, double frac) {
    const auto a = laplacian_plus_mass(geom);
    const double target = frac * variance_c_eps(geom);
    double lo = 1.0, hi = 1.0;
    while (head_mass(a, lo) > target) lo /= 2.0;
    while (head_mass(a, hi) <= target && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        double mid = std::sqrt(lo * hi);
        (head_mass(a, mid) > target ? hi : lo) = mid;
    }
    return lo;
}

ScaleGrid make_geometric_grid(const LatticeGeometry& geom, double rho,
                              double t_max, double t_min) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("make_geometric_grid: rho must be in (0,1)");
    if (t_max <= 0.0) t_max = default_t_max(geom);
    if (t_min <= 0.0) t_min = default_t_min(geom);
    if (t_min >= t_max) throw std::invalid_argument("make_geometric_grid: t_min >= t_max");
    std::vector<double> ts{scale_infinity()};
    for (double t = t_max; t > t_min; t *= rho) ts.push_back(t);
    ts.push_back(t_min);
    ts.push_back(0.0);
    return ScaleGrid(std::move(ts));
}

SpectralField sample_spectral_gaussian(const LatticeGeometry& geom, CounterRng& rng,
                                       const std::vector<double>& variance) {
    const int n = geom.n;
    SpectralField out(geom);
    for (int m1 = 0; m1 < n; ++m1) {
        for (int m2 = 0; m2 < n; ++m2) {
            const int p1 = (n - m1) % n, p2 = (n - m2) % n;  // index of -k
            const bool self = (p1 == m1 && p2 == m2);
            // Canonical representative: self-conjugate modes, else the
            // lexicographically smaller of the pair.
            if (!self && (m1 > p1 || (m1 == p1 && m2 > p2))) continue;
            const size_t i = static_cast<size_t>(m1) * n + m2;
            const double v = variance[i];
            if (self) {
                out.coeffs[i] = rng.next_gaussian() * std::sqrt(v);
            } else {
                const double s = std::sqrt(0.5 * v);
                const double re = rng.next_gaussian() * s;
                const double im = rng.next_gaussian() * s;
                out.coeffs[i] = {re, im};
                out.coeffs[static_cast<size_t>(p1) * n + p2] = {re, -im};
            }
        }
    }
    return out;
}

RealField sample_gff(const LatticeGeometry& geom, uint64_t seed) {
    auto a = laplacian_plus_mass(geom);
    std::vector<double> var(a.size());
    for (size_t i = 0; i < a.size(); ++i) var[i] = 1.0 / a[i];
    CounterRng rng(derive_seed(seed, {"gff"}));
    return inverse_fft(sample_spectral_gaussian(geom, rng, var));
}

GffPath sample_scale_path(const LatticeGeometry& geom, const ScaleGrid& grid, uint64_t seed) {
    const auto a = laplacian_plus_mass(geom);
    GffPath path;
    path.grid = grid;
    path.seed = seed;
    path.fields.reserve(grid.size());
    path.fields.emplace_back(geom);  // t = inf
    SpectralField acc(geom);
    for (size_t j = 0; j + 1 < grid.size(); ++j) {
        // Increment over (t_{j+1}, t_j]: per-mode variance c_{t_j} - c_{t_{j+1}}.
        std::vector<double> var(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            var[i] = pv_covariance_scalar(a[i], grid.times[j]) -
                     pv_covariance_scalar(a[i], grid.times[j + 1]);
        CounterRng rng(derive_seed(seed, {"gff-increment", j}));
        SpectralField inc = sample_spectral_gaussian(geom, rng, var);
        for (size_t i = 0; i < acc.coeffs.size(); ++i) acc.coeffs[i] += inc.coeffs[i];
        path.fields.push_back(inverse_fft(acc));
    }
    return path;
}

RealField y_field(const GffPath& path, double t) {
    const RealField& phi0 = path.fields.back();
    const RealField& phit = path.fields[path.grid.index_of(t)];
    RealField out = phi0;
    out -= phit;
    return out;
}

}  // namespace pphi
