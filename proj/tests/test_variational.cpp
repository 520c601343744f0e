#include "doctest.h"

#include <cmath>

#include "pphi/fft.hpp"
#include "pphi/norms.hpp"
#include "pphi/stats.hpp"
#include "pphi/variational.hpp"

using namespace pphi;

namespace {

FlowConfig make_cfg(const LatticeGeometry& g, std::vector<double> coeffs, double e,
                    double rho = 0.7, int mc_inner = 64, uint64_t seed = 1) {
    WickPolynomial poly(std::move(coeffs), variance_c_eps(g), e);
    return FlowConfig{g, poly, make_geometric_grid(g, rho), mc_inner, seed};
}

double quadratic_reference(const LatticeGeometry& g, double a2) {
    const auto a = laplacian_plus_mass(g);
    double s = 0.0;
    for (double ai : a) {
        const double c = 1.0 / ai;
        s += 0.5 * (std::log(1.0 + 2.0 * a2 * c) - 2.0 * a2 * c);
    }
    return s;
}

DriftPath random_drift(const FlowConfig& cfg, uint64_t seed, double amp) {
    DriftPath u(cfg.grid, cfg.geom);
    CounterRng rng(seed);
    for (auto& f : u.fields)
        for (double& v : f.values) v = amp * rng.next_gaussian();
    // damp entries on long intervals so the action is finite and modest
    for (size_t j = 1; j + 1 < cfg.grid.size(); ++j) {
        const double len = cfg.grid.times[j] - cfg.grid.times[j + 1];
        const double damp = 1.0 / std::sqrt(1.0 + len);
        for (double& v : u.fields[j - 1].values) v *= damp;
    }
    return u;
}

}  // namespace

TEST_CASE("integrated_drift: zero drift, closed form vs quadrature, additivity") {
    LatticeGeometry g(8, 1.0);
    FlowConfig cfg = make_cfg(g, {0.0, 0.0, 0.0, 1.0}, 50.0);

    DriftPath zero(cfg.grid, g);
    RealField z = integrated_drift(zero, 0.0, scale_infinity());
    for (double v : z.values) CHECK(v == 0.0);

    // single interval, spatially constant drift: factor = closed-form log,
    // checked against high-resolution quadrature of q
    const size_t j = cfg.grid.size() / 2;
    const double b = cfg.grid.times[j], a_t = cfg.grid.times[j + 1];
    DriftPath u(cfg.grid, g);
    u.fields[j - 1] = RealField(g, 1.0);
    RealField I = integrated_drift(u, 0.0, scale_infinity());
    const double a0 = g.mass2;  // zero mode symbol
    double quad = 0.0;
    const int npts = 10000;
    for (int i = 0; i < npts; ++i) {
        const double t = a_t + (b - a_t) * (i + 0.5) / npts;
        quad += 1.0 / (t * a0 + 1.0);
    }
    quad *= (b - a_t) / npts;
    CHECK(I.values[0] == doctest::Approx(quad).epsilon(1e-6));
    CHECK(q_time_integral_scalar(a0, a_t, b) == doctest::Approx(quad).epsilon(1e-6));

    // additivity across a middle grid time
    const double mid = cfg.grid.times[j];
    DriftPath w = random_drift(cfg, 5, 0.3);
    RealField left = integrated_drift(w, 0.0, mid);
    RealField right = integrated_drift(w, mid, scale_infinity());
    RealField full = integrated_drift(w, 0.0, scale_infinity());
    for (size_t i = 0; i < full.values.size(); ++i)
        CHECK(left.values[i] + right.values[i] ==
              doctest::Approx(full.values[i]).epsilon(1e-12));

    CHECK_THROWS_AS(integrated_drift(w, scale_infinity(), 0.0), std::invalid_argument);
}

TEST_CASE("bd_objective: u = 0 reproduces direct MC of E[v0_cut(Y)]") {
    LatticeGeometry g(8, 1.0);
    FlowConfig cfg = make_cfg(g, {0.0, 0.0, 0.0, 1.0}, 50.0);
    DriftPath zero(cfg.grid, g);
    MeanSE obj = bd_objective(zero, cfg, 4000, 17);
    std::vector<double> direct(4000);
    for (int b = 0; b < 4000; ++b)
        direct[b] = v0_cut(sample_gff(g, derive_seed(99, {"direct", b})), cfg.poly);
    MeanSE d = mean_se(direct);
    CHECK(std::abs(obj.mean - d.mean) < 3.0 * std::sqrt(obj.se * obj.se + d.se * d.se));
}

TEST_CASE("minimize_open_loop: P = 0 stays at zero action") {
    LatticeGeometry g(8, 1.0);
    FlowConfig cfg = make_cfg(g, {}, std::numeric_limits<double>::infinity());
    auto [u, rep] = minimize_open_loop(cfg, {30, 0.2, 8}, 3);
    CHECK(drift_action(u) <= 1e-6);
    CHECK(std::abs(rep.f_value) <= 1e-9);
    CHECK(std::abs(rep.reference_log_laplace) <= 1e-9);
}

TEST_CASE("minimize_open_loop: quadratic lands at the deterministic-class optimum") {
    LatticeGeometry g(8, 1.0);
    const double a2 = 0.5;
    FlowConfig cfg = make_cfg(g, {0.0, a2}, std::numeric_limits<double>::infinity());
    auto [u, rep] = minimize_open_loop(cfg, {60, 0.15, 16}, 5);
    // Over deterministic drifts the quadratic objective is
    // a2 ||I(u)||^2 + action/2 >= 0, minimized at u = 0; the adapted
    // reference is strictly below. Check we sit at the class optimum and
    // above the reference (one-sided Boue-Dupuis inequality).
    const double ref = quadratic_reference(g, a2);
    CHECK(rep.reference_log_laplace == doctest::Approx(ref).epsilon(0.05));
    CHECK(std::abs(rep.f_value) < 0.05 * std::abs(ref) + rep.f_ci);
    CHECK(rep.f_value > rep.reference_log_laplace - rep.f_ci - rep.reference_ci);
    CHECK(drift_action(u) < 0.05);
}

TEST_CASE("variational upper bound holds for random drifts") {
    LatticeGeometry g(8, 1.0);
    FlowConfig cfg = make_cfg(g, {0.0, 0.0, 0.0, 1.0}, 50.0, 0.6);
    auto [ref, ref_ci] = reference_log_laplace(cfg, 6000, 21);
    for (int trial = 0; trial < 20; ++trial) {
        DriftPath u = random_drift(cfg, derive_seed(23, {"drift", trial}), 0.4);
        MeanSE obj = bd_objective(u, cfg, 400, derive_seed(23, {"batch", trial}));
        CHECK(obj.mean >= ref - 3.0 * obj.se - ref_ci);
    }
}

TEST_CASE("feedback_objective: P = 0 gives zero cost, reference and gap") {
    LatticeGeometry g(8, 1.0);
    FlowConfig cfg = make_cfg(g, {}, std::numeric_limits<double>::infinity());
    BdReport rep = feedback_objective(cfg, 8, 31);
    CHECK(rep.f_value == 0.0);
    CHECK(rep.reference_log_laplace == 0.0);
    CHECK(rep.gap == 0.0);
}

TEST_CASE("feedback_objective: quadratic gap small against the closed form") {
    LatticeGeometry g(8, 1.0);
    const double a2 = 0.5;
    FlowConfig cfg = make_cfg(g, {0.0, a2}, 1e8, 0.7, 128, 41);
    BdReport rep = feedback_objective(cfg, 300, 43);
    const double ref = quadratic_reference(g, a2);
    CHECK(rep.reference_log_laplace == doctest::Approx(ref).epsilon(0.08));
    CHECK(std::abs(rep.gap) < 0.05 * std::abs(ref) + rep.f_ci + rep.reference_ci);
}

TEST_CASE("sobolev bounds on integrated drifts (calibrated constant)") {
    // small-scale bound ||I_{s,t}(u)||_{H^alpha}^2 <= C (t-s)^{1-alpha} action
    // calibrated on one set of drifts, checked on a fresh set across eps.
    for (double alpha : {0.0, 0.5, 1.0}) {
        double c_fit = 0.0;
        for (int n : {8, 16}) {
            LatticeGeometry g(n, 1.0);
            FlowConfig cfg = make_cfg(g, {}, std::numeric_limits<double>::infinity(), 0.55);
            for (int trial = 0; trial < 20; ++trial) {
                DriftPath u = random_drift(cfg, derive_seed(71, {"cal", n, trial}), 0.5);
                const size_t jmid = cfg.grid.size() / 2;
                const double s = cfg.grid.times[jmid + 2], t = cfg.grid.times[jmid];
                RealField I = integrated_drift(u, s, t);
                double act = 0.0;
                for (size_t j = jmid; j < jmid + 2; ++j) {
                    double l2 = 0.0;
                    for (double v : u.fields[j - 1].values) l2 += v * v;
                    act += l2 / g.sites() * (cfg.grid.times[j] - cfg.grid.times[j + 1]);
                }
                const double lhs = std::pow(sobolev_norm(I, alpha), 2.0);
                const double rhs = std::pow(t - s, 1.0 - alpha) * act;
                if (rhs > 0.0) c_fit = std::max(c_fit, lhs / rhs);
            }
        }
        const double c_bound = 1.5 * c_fit;
        LatticeGeometry g(32, 1.0);
        FlowConfig cfg = make_cfg(g, {}, std::numeric_limits<double>::infinity(), 0.55);
        for (int trial = 0; trial < 20; ++trial) {
            DriftPath u = random_drift(cfg, derive_seed(73, {"fresh", trial}), 0.5);
            const size_t jmid = cfg.grid.size() / 2;
            const double s = cfg.grid.times[jmid + 2], t = cfg.grid.times[jmid];
            RealField I = integrated_drift(u, s, t);
            double act = 0.0;
            for (size_t j = jmid; j < jmid + 2; ++j) {
                double l2 = 0.0;
                for (double v : u.fields[j - 1].values) l2 += v * v;
                act += l2 / g.sites() * (cfg.grid.times[j] - cfg.grid.times[j + 1]);
            }
            const double lhs = std::pow(sobolev_norm(I, alpha), 2.0);
            CHECK(lhs <= c_bound * std::pow(t - s, 1.0 - alpha) * act + 1e-12);
        }
    }
}
