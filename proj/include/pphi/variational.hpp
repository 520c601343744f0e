#pragma once

#include <vector>

#include "pphi/flow.hpp"

namespace pphi {

/// Time-discretized open-loop drift: one field per interior grid time t_j
/// (j = 1 .. K-1), held constant on the interval [t_{j+1}, t_j]. No drift on
/// the tail interval (t_1, inf).
struct DriftPath {
    ScaleGrid grid;
    std::vector<RealField> fields;  // fields[j-1] is the value at t_j

    DriftPath() = default;
    DriftPath(const ScaleGrid& g, const LatticeGeometry& geom);
};

/// I_{s,t}(u) = int_s^t q_tau u_tau dtau over grid times s <= t, using the
/// exact per-mode factor log((b a + 1)/(a a + 1)) / a on each interval.
RealField integrated_drift(const DriftPath& u, double s, double t);

/// int ||u_tau||_L2^2 dtau (piecewise constant in tau).
double drift_action(const DriftPath& u);

struct BdReport {
    double f_value = 0.0;           // E[ v0_cut(Y + I(u)) + action/2 ]
    double f_ci = 0.0;
    double reference_log_laplace = 0.0;  // -log E[exp(-v0_cut(Y))]
    double reference_ci = 0.0;
    double gap = 0.0;               // f_value - reference
};

/// Monte-Carlo value of the Boue-Dupuis functional for a deterministic
/// drift: mean and SE over `batch` fresh full-covariance samples.
MeanSE bd_objective(const DriftPath& u, const FlowConfig& cfg, int batch, uint64_t seed);

/// -log E[exp(-v0_cut(Y_inf))] by log-mean-exp with max-subtraction;
/// half-width from a percentile bootstrap.
std::pair<double, double> reference_log_laplace(const FlowConfig& cfg, int batch,
                                                uint64_t seed);

struct SgdParams {
    int steps = 200;
    double rate = 0.1;
    int batch = 64;
};

/// Stochastic gradient descent on the open-loop drift with the pathwise
/// (reparameterization) gradient. Throws on divergence (objective exceeding
/// the initial value by the 10x guard).
std::pair<DriftPath, BdReport> minimize_open_loop(const FlowConfig& cfg,
                                                  const SgdParams& sgd, uint64_t seed);

/// Evaluates the Boue-Dupuis cost of the feedback drift
/// u_{t_j} = -q_{t_j} grad v_{t_j}(Phi_{t_j}) realized along per-replica
/// Polchinski paths, against an independently estimated reference.
BdReport feedback_objective(const FlowConfig& cfg, int replicas, uint64_t seed);

}  // namespace pphi
