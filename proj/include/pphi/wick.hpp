#pragma once

#include <vector>

#include "pphi/field.hpp"

namespace pphi {

/// Wick-ordered interaction polynomial P(r) = sum_{k=1}^{N} a_k r^k with N
/// even and a_N > 0 (no constant term), its Wick variance c and the energy
/// cut-off E (cutoff_e = inf disables the cut-off).
struct WickPolynomial {
    std::vector<double> coeffs;  // coeffs[k-1] = a_k
    double wick_variance = 0.0;
    double cutoff_e = std::numeric_limits<double>::infinity();

    WickPolynomial() = default;
    WickPolynomial(std::vector<double> a, double c, double e);

    int degree() const { return static_cast<int>(coeffs.size()); }
    bool is_zero() const;
};

/// Probabilists' Hermite polynomial He_n(x) via the three-term recurrence.
double hermite(int n, double x);

/// Pointwise Wick power :f^n:_c = c^{n/2} He_n(f / sqrt(c)); plain power at
/// c = 0. Leading coefficient in f is 1.
RealField wick_power(const RealField& f, int n, double c);

/// Pointwise :P(f(x)):_c with c = P.wick_variance.
RealField wick_polynomial_field(const RealField& f, const WickPolynomial& p);

/// Hamiltonian v0(f) = eps^2 sum_x :P(f(x)):.
double v0(const RealField& f, const WickPolynomial& p);

/// Concave C^2 energy cut-off: identity below E/2, constant E from 3E/2 on,
/// with a smooth monotone bridge in between (derivative in [0,1],
/// chi_E(x) <= x on [0, inf)). E = inf gives the identity.
double chi_e(double x, double e);
double chi_e_prime(double x, double e);

/// Cut-off Hamiltonian chi_E(v0(f)).
double v0_cut(const RealField& f, const WickPolynomial& p);

/// Gradient of the cut-off Hamiltonian in the normalized-inner-product
/// convention: chi_E'(v0(f)) * :P'(f):, with the Wick derivative rule
/// d/dphi :phi^k: = k :phi^(k-1):.
RealField grad_v0_cut(const RealField& f, const WickPolynomial& p);

/// Dense monomial coefficients (index = power of phi) of :P(phi): and of the
/// Wick derivative :P'(phi):, for Horner evaluation in sampling loops.
/// Agrees with wick_polynomial_field / grad_v0_cut to rounding.
struct WickPolyDense {
    std::vector<double> value;
    std::vector<double> deriv;
};
WickPolyDense wick_dense(const WickPolynomial& p);

double horner(const std::vector<double>& coeffs, double x);

}  // namespace pphi
