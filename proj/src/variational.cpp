#include "pphi/variational.hpp"

#include <cmath>

#include "pphi/fft.hpp"
#include "pphi/norms.hpp"
#include "pphi/parallel.hpp"

namespace pphi {

DriftPath::DriftPath(const ScaleGrid& g, const LatticeGeometry& geom) : grid(g) {
    for (size_t j = 1; j + 1 < g.size(); ++j) fields.emplace_back(geom);
}

namespace {

// Per-interval spectral factors int_{t_{j+1}}^{t_j} q_tau dtau, j = 1..K-1.
std::vector<std::vector<double>> interval_q_factors(const ScaleGrid& grid,
                                                    const LatticeGeometry& geom) {
    const auto a = laplacian_plus_mass(geom);
    std::vector<std::vector<double>> f;
    for (size_t j = 1; j + 1 < grid.size(); ++j) {
        std::vector<double> w(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            w[i] = q_time_integral_scalar(a[i], grid.times[j + 1], grid.times[j]);
        f.push_back(std::move(w));
    }
    return f;
}

RealField apply_spectrum(const RealField& f, const std::vector<double>& w) {
    SpectralField g = forward_fft(f);
    for (size_t i = 0; i < g.coeffs.size(); ++i) g.coeffs[i] *= w[i];
    return inverse_fft(g);
}

double l2_sq(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return s / (static_cast<double>(f.geom.n) * f.geom.n);
}

}  // namespace

RealField integrated_drift(const DriftPath& u, double s, double t) {
    const size_t js = u.grid.index_of(t);   // smaller index = larger time
    const size_t jt = u.grid.index_of(s);
    if (js > jt) throw std::invalid_argument("integrated_drift: need s <= t");
    if (u.fields.empty()) throw std::invalid_argument("integrated_drift: empty drift");
    const LatticeGeometry geom = u.fields.front().geom;
    const auto a = laplacian_plus_mass(geom);
    RealField out(geom);
    for (size_t j = std::max<size_t>(js, 1); j < jt; ++j) {
        // interval [times[j+1], times[j]], drift value fields[j-1]
        std::vector<double> w(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            w[i] = q_time_integral_scalar(a[i], u.grid.times[j + 1], u.grid.times[j]);
        out += apply_spectrum(u.fields[j - 1], w);
    }
    return out;
}

double drift_action(const DriftPath& u) {
    double s = 0.0;
    for (size_t j = 1; j + 1 < u.grid.size(); ++j)
        s += l2_sq(u.fields[j - 1]) * (u.grid.times[j] - u.grid.times[j + 1]);
    return s;
}

MeanSE bd_objective(const DriftPath& u, const FlowConfig& cfg, int batch, uint64_t seed) {
    if (batch < 2) throw std::invalid_argument("bd_objective: batch must be >= 2");
    const RealField shift = integrated_drift(u, 0.0, scale_infinity());
    const double half_action = 0.5 * drift_action(u);
    std::vector<double> costs(static_cast<size_t>(batch));
    for (int b = 0; b < batch; ++b) {
        RealField y = sample_gff(cfg.geom, derive_seed(seed, {"bd-y", b}));
        y += shift;
        costs[static_cast<size_t>(b)] = v0_cut(y, cfg.poly) + half_action;
    }
    return mean_se(costs);
}

std::pair<double, double> reference_log_laplace(const FlowConfig& cfg, int batch,
                                                uint64_t seed) {
    std::vector<double> neg_v(static_cast<size_t>(batch));
    for (int b = 0; b < batch; ++b) {
        RealField y = sample_gff(cfg.geom, derive_seed(seed, {"ref-y", b}));
        neg_v[static_cast<size_t>(b)] = -v0_cut(y, cfg.poly);
    }
    const double ref = -log_mean_exp(neg_v);
    const double ci = bootstrap_halfwidth(
        neg_v, [](const std::vector<double>& xs) { return -log_mean_exp(xs); },
        derive_seed(seed, {"ref-boot"}), 400);
    return {ref, ci};
}

std::pair<DriftPath, BdReport> minimize_open_loop(const FlowConfig& cfg,
                                                  const SgdParams& sgd, uint64_t seed) {
    if (sgd.steps < 1 || sgd.batch < 1 || !(sgd.rate > 0.0))
        throw std::invalid_argument("minimize_open_loop: sgd parameters must be positive");
    DriftPath u(cfg.grid, cfg.geom);
    const auto factors = interval_q_factors(cfg.grid, cfg.geom);
    const size_t nu = u.fields.size();

    auto objective = [&](uint64_t s, int batch) {
        return bd_objective(u, cfg, batch, s);
    };
    const double initial = objective(derive_seed(seed, {"sgd-init"}), sgd.batch).mean;

    for (int step = 0; step < sgd.steps; ++step) {
        const RealField shift = integrated_drift(u, 0.0, scale_infinity());
        std::vector<RealField> grad_u(nu, RealField(cfg.geom));
        double obj = 0.0;
        for (int b = 0; b < sgd.batch; ++b) {
            RealField y = sample_gff(cfg.geom, derive_seed(seed, {"sgd-y", step, b}));
            y += shift;
            obj += v0_cut(y, cfg.poly);
            RealField g = grad_v0_cut(y, cfg.poly);
            for (size_t j = 0; j < nu; ++j) grad_u[j] += apply_spectrum(g, factors[j]);
        }
        obj = obj / sgd.batch + 0.5 * drift_action(u);
        if (obj > initial + 10.0 * (std::abs(initial) + 1.0))
            throw std::runtime_error("minimize_open_loop: objective diverged");
        for (size_t j = 0; j < nu; ++j) {
            const double dt = u.grid.times[j + 1] - u.grid.times[j + 2];
            // precondition by the action curvature so long intervals stay stable
            const double step_j = sgd.rate / (1.0 + dt);
            for (size_t i = 0; i < grad_u[j].values.size(); ++i)
                u.fields[j].values[i] -= step_j * (grad_u[j].values[i] / sgd.batch +
                                                   u.fields[j].values[i] * dt);
        }
    }

    BdReport rep;
    const MeanSE fin = bd_objective(u, cfg, std::max(sgd.batch * 4, 64),
                                    derive_seed(seed, {"sgd-eval"}));
    auto [ref, ref_ci] = reference_log_laplace(cfg, std::max(sgd.batch * 16, 512),
                                               derive_seed(seed, {"sgd-ref"}));
    rep.f_value = fin.mean;
    rep.f_ci = 3.0 * fin.se;
    rep.reference_log_laplace = ref;
    rep.reference_ci = ref_ci;
    rep.gap = rep.f_value - ref;
    return {std::move(u), rep};
}

BdReport feedback_objective(const FlowConfig& cfg, int replicas, uint64_t seed) {
    if (replicas < 2) throw std::invalid_argument("feedback_objective: replicas must be >= 2");
    const auto a = laplacian_plus_mass(cfg.geom);
    std::vector<double> costs(static_cast<size_t>(replicas));

    parallel_for(static_cast<size_t>(replicas), [&](size_t r) {
        FlowConfig rcfg = cfg;
        rcfg.seed = derive_seed(seed, {"fb-flow", r});
        GffPath path = sample_scale_path(cfg.geom, cfg.grid,
                                         derive_seed(seed, {"fb-gff", r}));
        CouplingSample cs = integrate_backward(rcfg, path);

        // Feedback drift u_{t_j} = -q_{t_j} grad v_{t_j}(Phi_{t_j}) on the
        // interior grid times, evaluated with fresh estimator noise.
        DriftPath u(cfg.grid, cfg.geom);
        for (size_t j = 1; j + 1 < cfg.grid.size(); ++j) {
            RealField g = grad_v_t_estimate(cs.phi_p[j], cfg.grid.times[j], rcfg,
                                            derive_seed(seed, {"fb-grad", r, j}));
            SpectralField gs = forward_fft(g);
            for (size_t i = 0; i < gs.coeffs.size(); ++i)
                gs.coeffs[i] *= -q_scalar(a[i], cfg.grid.times[j]);
            u.fields[j - 1] = inverse_fft(gs);
        }

        RealField y = cs.phi_gff.back();  // Y_inf = Phi_0^GFF
        y += integrated_drift(u, 0.0, scale_infinity());
        costs[r] = v0_cut(y, cfg.poly) + 0.5 * drift_action(u);
    });

    BdReport rep;
    const MeanSE ms = mean_se(costs);
    auto [ref, ref_ci] = reference_log_laplace(cfg, std::max(replicas * 8, 2000),
                                               derive_seed(seed, {"fb-ref"}));
    rep.f_value = ms.mean;
    rep.f_ci = 3.0 * ms.se;
    rep.reference_log_laplace = ref;
    rep.reference_ci = ref_ci;
    rep.gap = ms.mean - ref;
    return rep;
}

}  // namespace pphi
