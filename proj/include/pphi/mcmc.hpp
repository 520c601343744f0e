#pragma once

#include <vector>

#include "pphi/field.hpp"
#include "pphi/wick.hpp"

namespace pphi {

struct McmcConfig {
    LatticeGeometry geom;
    WickPolynomial poly;
    double step = 0.05;        // Langevin step size h (tuned during burn-in)
    int burn_in = 2000;
    int thin = 10;
    int n_samples = 1000;
    uint64_t seed = 0;
    bool auto_tune = true;     // adapt step toward target acceptance in burn-in
    double target_accept = 0.574;
};

struct McmcDiagnostics {
    double acceptance_rate = 0.0;
    double step_used = 0.0;
    double ess_l2 = 0.0;   // effective sample size of <f,f>
    double ess_max = 0.0;  // effective sample size of max f
};

struct McmcResult {
    std::vector<RealField> samples;
    McmcDiagnostics diagnostics;
};

/// Log density (up to a constant) of the target exp(-v0_cut) d nu_GFF and
/// its gradient in the normalized convention; the Gaussian part is applied
/// spectrally.
std::pair<double, RealField> log_target_and_grad(const RealField& f, const McmcConfig& cfg);

/// Metropolis-adjusted Langevin chain. Deterministic given the config.
/// Throws when the acceptance rate over burn-in stays below 1%.
McmcResult mala_chain(const McmcConfig& cfg);

}  // namespace pphi
