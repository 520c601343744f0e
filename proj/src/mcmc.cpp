#include "pphi/mcmc.hpp"

#include <cmath>
#include <stdexcept>

#include "pphi/fft.hpp"
#include "pphi/scale_grid.hpp"
#include "pphi/spectral.hpp"
#include "pphi/stats.hpp"

namespace pphi {

namespace {

double inner_normalized(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s / (static_cast<double>(a.geom.n) * a.geom.n);
}

RealField apply_precision(const RealField& f, const std::vector<double>& a) {
    SpectralField g = forward_fft(f);
    for (size_t i = 0; i < g.coeffs.size(); ++i) g.coeffs[i] *= a[i];
    return inverse_fft(g);
}

// White noise with respect to the normalized inner product: per-mode
// spectral variance 1 for every dual frequency.
RealField white_noise(const LatticeGeometry& geom, CounterRng& rng) {
    std::vector<double> ones(static_cast<size_t>(geom.sites()), 1.0);
    return inverse_fft(sample_spectral_gaussian(geom, rng, ones));
}

}  // namespace

std::pair<double, RealField> log_target_and_grad(const RealField& f, const McmcConfig& cfg) {
    const auto a = laplacian_plus_mass(cfg.geom);
    RealField af = apply_precision(f, a);
    const double quad = 0.5 * inner_normalized(f, af);
    const double logp = -quad - v0_cut(f, cfg.poly);
    RealField grad = grad_v0_cut(f, cfg.poly);
    for (size_t i = 0; i < grad.values.size(); ++i)
        grad.values[i] = -af.values[i] - grad.values[i];
    return {logp, grad};
}

McmcResult mala_chain(const McmcConfig& cfg) {
    if (cfg.n_samples < 1) throw std::invalid_argument("mala_chain: n_samples must be >= 1");
    if (!(cfg.step > 0.0)) throw std::invalid_argument("mala_chain: step must be > 0");

    CounterRng noise(derive_seed(cfg.seed, {"mala-noise"}));
    CounterRng accept_rng(derive_seed(cfg.seed, {"mala-accept"}));

    double h = cfg.step;
    RealField x = sample_gff(cfg.geom, derive_seed(cfg.seed, {"mala-init"}));
    auto [logp, grad] = log_target_and_grad(x, cfg);

    McmcResult out;
    out.samples.reserve(static_cast<size_t>(cfg.n_samples));
    std::vector<double> obs_l2, obs_max;

    long accepted = 0, proposed = 0;
    long burn_accepted = 0, burn_proposed = 0;
    const long total = cfg.burn_in + static_cast<long>(cfg.n_samples) * cfg.thin;
    for (long it = 0; it < total; ++it) {
        const double hh = h * h;
        RealField xi = white_noise(cfg.geom, noise);
        RealField prop = x;
        for (size_t i = 0; i < prop.values.size(); ++i)
            prop.values[i] += 0.5 * hh * grad.values[i] + h * xi.values[i];
        auto [logp_new, grad_new] = log_target_and_grad(prop, cfg);

        // q(x | prop) / q(prop | x) with Gaussian proposal in the normalized metric
        RealField fwd = prop, bwd = x;
        for (size_t i = 0; i < fwd.values.size(); ++i) {
            fwd.values[i] -= x.values[i] + 0.5 * hh * grad.values[i];
            bwd.values[i] -= prop.values[i] + 0.5 * hh * grad_new.values[i];
        }
        const double log_q_fwd = -inner_normalized(fwd, fwd) / (2.0 * hh);
        const double log_q_bwd = -inner_normalized(bwd, bwd) / (2.0 * hh);
        const double log_alpha = logp_new - logp + log_q_bwd - log_q_fwd;

        ++proposed;
        const bool in_burn = it < cfg.burn_in;
        if (in_burn) ++burn_proposed;
        if (std::log(std::max(accept_rng.next_uniform(), 1e-300)) < log_alpha) {
            x = std::move(prop);
            logp = logp_new;
            grad = std::move(grad_new);
            ++accepted;
            if (in_burn) ++burn_accepted;
        }

        if (in_burn && cfg.auto_tune && (it + 1) % 50 == 0) {
            const double rate = static_cast<double>(burn_accepted) /
                                std::max<long>(burn_proposed, 1);
            h *= std::exp(0.4 * (rate - cfg.target_accept));
            burn_accepted = 0;
            burn_proposed = 0;
        }
        if (it + 1 == cfg.burn_in) {
            const double rate = static_cast<double>(accepted) / std::max<long>(proposed, 1);
            if (rate < 0.01)
                throw std::runtime_error("mala_chain: acceptance rate below 1% over burn-in "
                                         "(step too large)");
            accepted = 0;
            proposed = 0;
        }
        if (it >= cfg.burn_in && (it - cfg.burn_in + 1) % cfg.thin == 0) {
            obs_l2.push_back(inner_normalized(x, x));
            double mx = x.values[0];
            for (double v : x.values) mx = std::max(mx, v);
            obs_max.push_back(mx);
            out.samples.push_back(x);
        }
    }

    out.diagnostics.acceptance_rate =
        proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    out.diagnostics.step_used = h;
    out.diagnostics.ess_l2 = ess_autocorrelation(obs_l2);
    out.diagnostics.ess_max = ess_autocorrelation(obs_max);
    return out;
}

}  // namespace pphi
