#pragma once

#include <functional>

#include "pphi/fft.hpp"
#include "pphi/field.hpp"

namespace pphi {

/// Scale parameter t in [0, inf]. The endpoint t = inf is represented by
/// the IEEE infinity and handled by exact branches, never as a large float.
inline double scale_infinity() { return std::numeric_limits<double>::infinity(); }

/// Multiplier of the negative lattice Laplacian,
/// n^2 * sum_i (2 - 2 cos(2 pi k_i / n)). Throws when k is outside the dual set.
double laplacian_multiplier(DualIndex k, const LatticeGeometry& geom);

/// Relative deficit 1 - (2 - 2 cos x) / x^2 of the one-dimensional lattice
/// symbol against the continuum |k|^2 (diagnostic for the multiplier
/// comparison; vanishes quadratically at x = 0).
double laplacian_deficit(double x);

/// Pauli-Villars covariance multiplier c_t(k) = 1 / (lap(k) + m^2 + 1/t);
/// equals 0 at t = 0 and 1/(lap + m^2) at t = inf.
double pv_covariance_multiplier(DualIndex k, double t, const LatticeGeometry& geom);

/// q_t(k) = 1 / (t (lap(k) + m^2) + 1), the square root of d/dt c_t.
double q_multiplier(DualIndex k, double t, const LatticeGeometry& geom);

// Scalar versions on a = lap(k) + m^2 (a > 0), used in closed-form scale
// integrals throughout the flow and variational modules.
double pv_covariance_scalar(double a, double t);
double q_scalar(double a, double t);
/// Closed form of int_s^t q_tau(a) dtau = log((t a + 1)/(s a + 1)) / a.
double q_time_integral_scalar(double a, double s, double t);

/// Pointwise variance of the full-covariance field: sum over the dual set of
/// c_inf(k) (site-independent by stationarity).
double variance_c_eps(const LatticeGeometry& geom);

/// Applies a diagonal spectral multiplier k -> w(k) to a field.
RealField apply_multiplier(const RealField& f,
                           const std::function<double(DualIndex)>& w);

/// a(k) = lap(k) + m^2 evaluated over the whole spectrum in storage layout.
std::vector<double> laplacian_plus_mass(const LatticeGeometry& geom);

/// Trigonometric embedding onto a finer grid (fine_n a multiple of n):
/// the spectrum is zero-padded so each coarse dual frequency keeps its
/// coefficient. Values at original sites are unchanged; the coefficient
/// content is preserved exactly (spectral isometry). Throws on incompatible
/// grids.
RealField embed_trig(const RealField& f, int fine_n);
SpectralField embed_spectrum(const SpectralField& f, int fine_n);

/// Fourier restriction onto the coarse grid: coefficients of coarse dual
/// frequencies survive (Nyquist images on the closed boundary square are
/// collected), everything else is dropped. Left inverse of embed_trig.
RealField restrict_field(const RealField& f_fine, int coarse_n);
SpectralField restrict_spectrum(const SpectralField& f_fine, int coarse_n);

}  // namespace pphi
