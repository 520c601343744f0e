#pragma once

#include <vector>

#include "pphi/field.hpp"
#include "pphi/rng.hpp"
#include "pphi/spectral.hpp"

namespace pphi {

/// Strictly decreasing scale times t_0 = inf > t_1 = T_max > ... > t_K = 0,
/// geometric in the interior (t_{j+1} = rho * t_j).
struct ScaleGrid {
    std::vector<double> times;

    ScaleGrid() = default;
    explicit ScaleGrid(std::vector<double> ts);

    size_t size() const { return times.size(); }
    /// Number of scale intervals (t_{j+1}, t_j].
    size_t intervals() const { return times.size() - 1; }
    /// Index of a grid time; throws if absent.
    size_t index_of(double t) const;
};

/// Smallest T with sum_k (c_inf(k) - c_T(k)) <= frac * sum_k c_inf(k);
/// controls the truncation of the t = inf boundary condition.
double default_t_max(const LatticeGeometry& geom, double frac = 1e-4);

/// Smallest grid scale: largest t with sum_k c_t(k) <= frac * sum_k c_inf(k).
double default_t_min(const LatticeGeometry& geom, double frac = 1e-4);

/// Builds {inf, T_max, rho*T_max, ..., t_min, 0}.
ScaleGrid make_geometric_grid(const LatticeGeometry& geom, double rho,
                              double t_max = -1.0, double t_min = -1.0);

/// Scale-decomposed Gaussian free field sampled on a grid: fields[j] is the
/// field at times[j]; fields[0] (t = inf) is identically zero and fields
/// accumulate independent spectral increments of per-mode variance
/// c_{t_j} - c_{t_{j+1}} toward t = 0.
struct GffPath {
    ScaleGrid grid;
    std::vector<RealField> fields;
    uint64_t seed = 0;

    const RealField& at_time(double t) const { return fields[grid.index_of(t)]; }
};

/// Draws a Hermitian-symmetric spectral Gaussian with per-mode variance
/// given in storage layout; modes are consumed in a fixed canonical order,
/// so the draw depends only on the rng stream position.
SpectralField sample_spectral_gaussian(const LatticeGeometry& geom, CounterRng& rng,
                                       const std::vector<double>& variance);

/// Exact sample of the full-covariance field (covariance multipliers c_inf).
RealField sample_gff(const LatticeGeometry& geom, uint64_t seed);

/// Samples the decomposed field on the grid, one independent increment per
/// scale interval with the closed-form per-mode variance.
GffPath sample_scale_path(const LatticeGeometry& geom, const ScaleGrid& grid, uint64_t seed);

/// Small-scale field Y_t = path(0) - path(t); spectral variance c_t.
RealField y_field(const GffPath& path, double t);

}  // namespace pphi
