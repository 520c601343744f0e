#pragma once

#include <complex>
#include <vector>

#include "pphi/geometry.hpp"

namespace pphi {

/// Real-valued field on the lattice, row-major: value at x = eps*(i1, i2)
/// lives at index i1*n + i2.
struct RealField {
    LatticeGeometry geom;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(LatticeGeometry g, double fill = 0.0)
        : geom(g), values(static_cast<size_t>(g.sites()), fill) {}

    double& at(int i1, int i2) { return values[static_cast<size_t>(i1) * geom.n + i2]; }
    double at(int i1, int i2) const { return values[static_cast<size_t>(i1) * geom.n + i2]; }

    RealField& operator+=(const RealField& o) {
        for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        for (size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    RealField& operator*=(double c) {
        for (double& v : values) v *= c;
        return *this;
    }
};

inline RealField operator+(RealField a, const RealField& b) { return a += b; }
inline RealField operator-(RealField a, const RealField& b) { return a -= b; }
inline RealField operator*(double c, RealField a) { return a *= c; }

/// Fourier coefficients in standard FFT layout; coefficient of the dual
/// frequency (k1, k2) sits at dual_storage_index. A field is admissible as
/// the spectrum of a real field when coeff(k) == conj(coeff(-k)).
struct SpectralField {
    LatticeGeometry geom;
    std::vector<std::complex<double>> coeffs;

    SpectralField() = default;
    explicit SpectralField(LatticeGeometry g)
        : geom(g), coeffs(static_cast<size_t>(g.sites()), {0.0, 0.0}) {}

    std::complex<double>& at(DualIndex k) { return coeffs[dual_storage_index(k, geom.n)]; }
    std::complex<double> at(DualIndex k) const { return coeffs[dual_storage_index(k, geom.n)]; }
};

}  // namespace pphi
