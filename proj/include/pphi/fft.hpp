#pragma once

#include "pphi/field.hpp"

namespace pphi {

/// Forward transform with the normalized-measure convention:
/// coeff(k) = eps^2 * sum_x f(x) exp(-i k.x).
SpectralField forward_fft(const RealField& f);

/// Inverse transform f(x) = sum_k coeff(k) exp(i k.x). Throws
/// std::runtime_error when the imaginary residue exceeds 1e-9 of the field
/// norm (Hermitian symmetry violation).
RealField inverse_fft(const SpectralField& g);

/// Inverse transform that discards the imaginary part without checking
/// symmetry. Used where the spectrum is deliberately one-sided.
RealField inverse_fft_real_part(const SpectralField& g);

}  // namespace pphi
