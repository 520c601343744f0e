#include "doctest.h"

#include <cmath>

#include "pphi/fft.hpp"
#include "pphi/scale_grid.hpp"
#include "pphi/stats.hpp"

using namespace pphi;

TEST_CASE("scale grid validation") {
    CHECK_THROWS_AS(ScaleGrid({1.0, 0.5, 0.0}), std::invalid_argument);  // no inf
    CHECK_THROWS_AS(ScaleGrid({scale_infinity(), 0.5, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ScaleGrid({scale_infinity(), 1.0}), std::invalid_argument);  // no 0
    ScaleGrid g({scale_infinity(), 2.0, 1.0, 0.0});
    CHECK(g.intervals() == 3);
    CHECK(g.index_of(1.0) == 2);
    CHECK_THROWS_AS(g.index_of(0.7), std::out_of_range);
}

TEST_CASE("geometric grid respects the tail rules") {
    LatticeGeometry geom(8, 1.0);
    ScaleGrid g = make_geometric_grid(geom, 0.7);
    const double c = variance_c_eps(geom);
    const auto a = laplacian_plus_mass(geom);
    double tail = 0.0, head = 0.0;
    for (double ai : a) {
        tail += 1.0 / ai - pv_covariance_scalar(ai, g.times[1]);
        head += pv_covariance_scalar(ai, g.times[g.size() - 2]);
    }
    CHECK(tail <= 1e-4 * c * (1.0 + 1e-9));
    CHECK(head <= 1e-4 * c * (1.0 + 1e-9));
    // interior geometric ratios (the final step onto t_min is a joint)
    for (size_t j = 1; j + 3 < g.size(); ++j)
        CHECK(g.times[j + 1] / g.times[j] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("sample_gff: mean, variance, covariance against multiplier sums") {
    LatticeGeometry geom(8, 1.0);
    const int reps = 20000;
    const double c_eps = variance_c_eps(geom);

    std::vector<double> at0(reps), at1(reps), at2(reps);
    for (int r = 0; r < reps; ++r) {
        RealField f = sample_gff(geom, derive_seed(7, {"rep", r}));
        at0[r] = f.at(0, 0);
        at1[r] = f.at(3, 5);
        at2[r] = f.at(4, 1);
    }
    MeanSE m = mean_se(at0);
    CHECK(std::abs(m.mean) < 3.0 * m.se);

    auto var_check = [&](const std::vector<double>& xs) {
        double v = 0.0;
        for (double x : xs) v += x * x;
        v /= xs.size();
        const double se = v * std::sqrt(2.0 / xs.size());
        CHECK(std::abs(v - c_eps) < 3.0 * se);
    };
    var_check(at0);
    var_check(at1);

    // covariance between two fixed sites: sum_k c_inf(k) e^{ik(x-y)}
    const auto a = laplacian_plus_mass(geom);
    const int dx1 = 3 - 4, dx2 = 5 - 1;
    double cov_expect = 0.0;
    for (int m1 = 0; m1 < geom.n; ++m1)
        for (int m2 = 0; m2 < geom.n; ++m2) {
            const double phase = 2.0 * M_PI * (fold_frequency(m1, geom.n) * dx1 +
                                               fold_frequency(m2, geom.n) * dx2) / geom.n;
            cov_expect += std::cos(phase) / a[static_cast<size_t>(m1) * geom.n + m2];
        }
    double cov = 0.0;
    for (int r = 0; r < reps; ++r) cov += at1[r] * at2[r];
    cov /= reps;
    std::vector<double> prods(reps);
    for (int r = 0; r < reps; ++r) prods[r] = at1[r] * at2[r];
    MeanSE pm = mean_se(prods);
    CHECK(std::abs(cov - cov_expect) < 3.0 * pm.se);
}

TEST_CASE("single-interval path matches sample_gff spectral variances") {
    LatticeGeometry geom(8, 2.0);
    ScaleGrid grid({scale_infinity(), 0.0});
    GffPath p = sample_scale_path(geom, grid, 5);
    CHECK(p.fields.size() == 2);
    for (double v : p.fields[0].values) CHECK(v == 0.0);
    // same per-mode variance law as sample_gff: check via many replicas on one mode
    const auto a = laplacian_plus_mass(geom);
    const int reps = 20000;
    double v_acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        GffPath q = sample_scale_path(geom, grid, derive_seed(11, {"rep", r}));
        SpectralField s = forward_fft(q.fields[1]);
        v_acc += std::norm(s.at({1, 2}));
    }
    v_acc /= reps;
    const double expect = 1.0 / a[dual_storage_index({1, 2}, geom.n)];
    CHECK(std::abs(v_acc - expect) < 3.0 * expect * std::sqrt(2.0 / reps));
}

TEST_CASE("increment variance over [1,2] for a unit-symbol mode is 1/6") {
    // c_2 - c_1 = 2/3 - 1/2 = 1/6 at a = 1 (the k = 0 mode with m^2 = 1)
    LatticeGeometry geom(8, 1.0);
    ScaleGrid grid({scale_infinity(), 2.0, 1.0, 0.0});
    const int reps = 30000;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        GffPath p = sample_scale_path(geom, grid, derive_seed(13, {"rep", r}));
        SpectralField hi = forward_fft(p.fields[1]);
        SpectralField lo = forward_fft(p.fields[2]);
        const double d = (lo.at({0, 0}) - hi.at({0, 0})).real();
        acc += d * d;
    }
    acc /= reps;
    CHECK(std::abs(acc - 1.0 / 6.0) < 3.0 * (1.0 / 6.0) * std::sqrt(2.0 / reps));
}

TEST_CASE("disjoint increments are uncorrelated") {
    LatticeGeometry geom(8, 1.0);
    ScaleGrid grid({scale_infinity(), 2.0, 1.0, 0.0});
    const int reps = 20000;
    std::vector<double> prod(reps);
    for (int r = 0; r < reps; ++r) {
        GffPath p = sample_scale_path(geom, grid, derive_seed(17, {"rep", r}));
        const double inc1 = p.fields[1].at(2, 2) - p.fields[0].at(2, 2);
        const double inc2 = p.fields[3].at(2, 2) - p.fields[2].at(2, 2);
        prod[r] = inc1 * inc2;
    }
    MeanSE m = mean_se(prod);
    CHECK(std::abs(m.mean) < 3.0 * m.se);
}

TEST_CASE("y_field: endpoints and variance") {
    LatticeGeometry geom(8, 1.0);
    ScaleGrid grid = make_geometric_grid(geom, 0.5);
    GffPath p = sample_scale_path(geom, grid, 23);
    RealField y0 = y_field(p, 0.0);
    for (double v : y0.values) CHECK(v == 0.0);
    RealField yinf = y_field(p, scale_infinity());
    for (size_t i = 0; i < yinf.values.size(); ++i)
        CHECK(yinf.values[i] == p.fields.back().values[i]);
    CHECK_THROWS_AS(y_field(p, 0.1234), std::out_of_range);

    // var of Y_t at an interior time matches sum_k c_t(k)
    const double t = grid.times[grid.size() / 2];
    const auto a = laplacian_plus_mass(geom);
    double expect = 0.0;
    for (double ai : a) expect += pv_covariance_scalar(ai, t);
    const int reps = 20000;
    std::vector<double> sq(reps);
    for (int r = 0; r < reps; ++r) {
        GffPath q = sample_scale_path(geom, grid, derive_seed(29, {"rep", r}));
        const double v = y_field(q, t).at(1, 1);
        sq[r] = v * v;
    }
    MeanSE m = mean_se(sq);
    CHECK(std::abs(m.mean - expect) < 3.0 * m.se);
}

TEST_CASE("telescoping: per-mode variance c_t - c_s nonnegative on grid pairs") {
    LatticeGeometry geom(16, 1.0);
    ScaleGrid grid = make_geometric_grid(geom, 0.6);
    const auto a = laplacian_plus_mass(geom);
    for (size_t j = 1; j < grid.size(); ++j)
        for (double ai : a)
            CHECK(pv_covariance_scalar(ai, grid.times[j - 1]) -
                      pv_covariance_scalar(ai, grid.times[j]) >=
                  0.0);
}

TEST_CASE("independence of small and large scales (cross-covariance)") {
    LatticeGeometry geom(8, 1.0);
    ScaleGrid grid({scale_infinity(), 4.0, 1.0, 0.25, 0.0});
    const int reps = 20000;
    std::vector<double> prod(reps);
    for (int r = 0; r < reps; ++r) {
        GffPath p = sample_scale_path(geom, grid, derive_seed(31, {"rep", r}));
        prod[r] = y_field(p, 1.0).at(3, 3) * p.fields[2].at(3, 3);
    }
    MeanSE m = mean_se(prod);
    CHECK(std::abs(m.mean) < 3.0 * m.se);
}

TEST_CASE("determinism: identical seeds give bit-identical paths") {
    LatticeGeometry geom(8, 1.0);
    ScaleGrid grid = make_geometric_grid(geom, 0.7);
    GffPath a = sample_scale_path(geom, grid, 123);
    GffPath b = sample_scale_path(geom, grid, 123);
    for (size_t j = 0; j < a.fields.size(); ++j)
        for (size_t i = 0; i < a.fields[j].values.size(); ++i)
            CHECK(a.fields[j].values[i] == b.fields[j].values[i]);
}
