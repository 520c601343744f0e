#include "pphi/flow.hpp"

#include <cmath>

#include "pphi/fft.hpp"
#include "pphi/norms.hpp"

namespace pphi {

RealField grad_v_t_estimate(const RealField& phi, double t, const FlowConfig& cfg,
                            uint64_t noise_seed) {
    if (cfg.mc_inner < 2) throw std::invalid_argument("grad_v_t_estimate: mc_inner must be >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("grad_v_t_estimate: t must be in (0, inf]");
    const auto& geom = cfg.geom;
    const size_t sites = static_cast<size_t>(geom.sites());
    const double eps2 = 1.0 / (static_cast<double>(geom.n) * geom.n);
    const double e_cut = cfg.poly.cutoff_e;
    const WickPolyDense dense = wick_dense(cfg.poly);

    const auto a = laplacian_plus_mass(geom);
    std::vector<double> var(a.size());
    for (size_t i = 0; i < a.size(); ++i) var[i] = pv_covariance_scalar(a[i], t);

    CounterRng rng(derive_seed(noise_seed, {"grad-v-zeta"}));

    // Online log-sum-exp: running max of the log weights with rescaling of
    // the weighted accumulators.
    double log_max = -std::numeric_limits<double>::infinity();
    double sum_w = 0.0, sum_w2 = 0.0;
    std::vector<double> acc(sites, 0.0);
    std::vector<double> shifted(sites), gloc(sites);

    for (int s = 0; s < cfg.mc_inner; ++s) {
        RealField zeta = inverse_fft(sample_spectral_gaussian(geom, rng, var));
        double v_raw = 0.0;
        for (size_t i = 0; i < sites; ++i) {
            shifted[i] = phi.values[i] + zeta.values[i];
            v_raw += horner(dense.value, shifted[i]);
        }
        v_raw *= eps2;
        const double lw = -chi_e(v_raw, e_cut);
        const double dchi = chi_e_prime(v_raw, e_cut);
        for (size_t i = 0; i < sites; ++i) gloc[i] = dchi * horner(dense.deriv, shifted[i]);

        if (lw > log_max) {
            const double r = std::exp(log_max - lw);
            sum_w *= r;
            sum_w2 *= r * r;
            for (double& v : acc) v *= r;
            log_max = lw;
        }
        const double w = std::exp(lw - log_max);
        sum_w += w;
        sum_w2 += w * w;
        for (size_t i = 0; i < sites; ++i) acc[i] += w * gloc[i];
    }

    if (sum_w * sum_w / sum_w2 < 2.0)
        throw DegenerateWeightsError("grad_v_t_estimate: effective sample size < 2");

    RealField out(geom);
    for (size_t i = 0; i < sites; ++i) out.values[i] = acc[i] / sum_w;
    return out;
}

CouplingSample integrate_backward(const FlowConfig& cfg, const GffPath& gff_path) {
    if (gff_path.grid.times != cfg.grid.times)
        throw std::invalid_argument("integrate_backward: grid mismatch");
    if (std::isinf(cfg.poly.cutoff_e) && !cfg.poly.is_zero())
        throw std::invalid_argument("integrate_backward: finite cutoff_e required");

    const auto& geom = cfg.geom;
    const auto a = laplacian_plus_mass(geom);
    const size_t steps = cfg.grid.intervals();

    CouplingSample out;
    out.grid = cfg.grid;
    out.phi_gff = gff_path.fields;
    out.phi_p.emplace_back(geom);
    out.phi_delta.emplace_back(geom);

    RealField delta(geom);
    for (size_t j = 0; j < steps; ++j) {
        const double tj = cfg.grid.times[j];
        const double tnext = cfg.grid.times[j + 1];
        if (!cfg.poly.is_zero()) {
            RealField g = grad_v_t_estimate(out.phi_p[j], tj, cfg,
                                            derive_seed(cfg.seed, {"flow-step", j}));
            SpectralField gs = forward_fft(g);
            for (size_t i = 0; i < gs.coeffs.size(); ++i)
                gs.coeffs[i] *= pv_covariance_scalar(a[i], tj) -
                                pv_covariance_scalar(a[i], tnext);
            delta -= inverse_fft(gs);
        }
        RealField phi = delta + gff_path.fields[j + 1];
        for (double v : phi.values)
            if (!std::isfinite(v))
                throw std::runtime_error("integrate_backward: non-finite field at scale index " +
                                         std::to_string(j + 1));
        out.phi_delta.push_back(delta);
        out.phi_p.push_back(std::move(phi));
    }
    return out;
}

DifferenceDiagnostics difference_diagnostics(const std::vector<CouplingSample>& samples,
                                             const std::vector<double>& alphas,
                                             const std::vector<double>& moment_exponents) {
    if (samples.empty())
        throw std::invalid_argument("difference_diagnostics: empty sample set");
    const ScaleGrid& grid = samples.front().grid;
    const size_t nt = grid.size();

    DifferenceDiagnostics rep;
    for (size_t j = 1; j < nt; ++j) rep.times.push_back(grid.times[j]);

    for (double alpha : alphas) {
        // Precompute per sample and per time the H^alpha norms.
        std::vector<std::vector<double>> norm_t(nt - 1), cont_t(nt - 1);
        for (const CouplingSample& s : samples) {
            const RealField& last = s.phi_delta.back();
            for (size_t j = 1; j < nt; ++j) {
                norm_t[j - 1].push_back(sobolev_norm(s.phi_delta[j], alpha));
                RealField diff = s.phi_delta[j];
                diff -= last;
                cont_t[j - 1].push_back(sobolev_norm(diff, alpha));
            }
        }
        for (double r : moment_exponents) {
            DifferenceDiagnostics::Curve curve;
            curve.alpha = alpha;
            curve.exponent = r;
            for (size_t j = 0; j + 1 < nt; ++j) {
                auto powed = norm_t[j];
                for (double& v : powed) v = std::pow(v, r);
                curve.moment.push_back(mean_se(powed));
                curve.moment_ci.push_back(bootstrap_halfwidth(
                    powed, [](const std::vector<double>& xs) { return mean_se(xs).mean; },
                    derive_seed(0x9e3779b9, {"diag", j}), 200));
                auto cpow = cont_t[j];
                for (double& v : cpow) v = std::pow(v, r);
                curve.continuity.push_back(mean_se(cpow));
                curve.continuity_ci.push_back(bootstrap_halfwidth(
                    cpow, [](const std::vector<double>& xs) { return mean_se(xs).mean; },
                    derive_seed(0x9e3779b9, {"diag-cont", j}), 200));
            }
            rep.curves.push_back(std::move(curve));
        }
    }
    return rep;
}

}  // namespace pphi
