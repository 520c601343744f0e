#pragma once

#include <stdexcept>
#include <vector>

#include "pphi/scale_grid.hpp"
#include "pphi/stats.hpp"
#include "pphi/wick.hpp"

namespace pphi {

struct FlowConfig {
    LatticeGeometry geom;
    WickPolynomial poly;
    ScaleGrid grid;
    int mc_inner = 128;  // samples per renormalised-gradient estimate
    uint64_t seed = 0;
};

/// Coupled triple on the scale grid; phi_p(t) = phi_delta(t) + phi_gff(t)
/// holds at every grid time by construction.
struct CouplingSample {
    ScaleGrid grid;
    std::vector<RealField> phi_p;
    std::vector<RealField> phi_gff;
    std::vector<RealField> phi_delta;
};

/// Thrown when the importance weights of the gradient estimator collapse
/// (effective sample size below 2); signals E or mc_inner misconfigured.
struct DegenerateWeightsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Self-normalized Monte-Carlo estimate of the renormalised-potential
/// gradient at scale t:
///   grad v_t(phi) = E[grad v0(phi+zeta) w] / E[w],  w = exp(-v0(phi+zeta)),
/// with zeta Gaussian of spectral variance c_t. Weights handled in log space
/// with max-subtraction; deterministic given noise_seed.
RealField grad_v_t_estimate(const RealField& phi, double t, const FlowConfig& cfg,
                            uint64_t noise_seed);

/// Explicit backward Euler for the Polchinski SDE on the grid: the drift is
/// frozen at the left (larger-t) endpoint of each interval and applied with
/// the exact integrated operator c_{t_j} - c_{t_{j+1}}; the Gaussian part is
/// the exact path increment. Requires a finite energy cut-off.
CouplingSample integrate_backward(const FlowConfig& cfg, const GffPath& gff_path);

/// Empirical moments of the difference field per grid time, with bootstrap
/// confidence half-widths, plus the continuity statistic toward t = 0.
struct DifferenceDiagnostics {
    std::vector<double> times;  // finite grid times (excluding t = inf)
    struct Curve {
        double alpha = 0.0;
        double exponent = 0.0;                 // moment exponent r
        std::vector<MeanSE> moment;            // E ||phi_delta(t)||_{H^alpha}^r
        std::vector<double> moment_ci;         // bootstrap half-widths
        std::vector<MeanSE> continuity;        // E ||phi_delta(t)-phi_delta(0)||^r
        std::vector<double> continuity_ci;
    };
    std::vector<Curve> curves;
};

DifferenceDiagnostics difference_diagnostics(const std::vector<CouplingSample>& samples,
                                             const std::vector<double>& alphas,
                                             const std::vector<double>& moment_exponents);

}  // namespace pphi
