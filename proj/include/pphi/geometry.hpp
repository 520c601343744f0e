#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pphi {

/// Square mesh of the unit torus with n sites per side (mesh eps = 1/n)
/// and mass parameter m^2 > 0. The Fourier dual set consists of wave
/// vectors k = 2*pi*(k1, k2) with integer k_i in (-n/2, n/2].
struct LatticeGeometry {
    int n = 0;
    double mass2 = 0.0;

    LatticeGeometry() = default;
    LatticeGeometry(int n_, double mass2_) : n(n_), mass2(mass2_) {
        if (n < 2) throw std::invalid_argument("LatticeGeometry: n must be >= 2");
        if (!(mass2 > 0.0)) throw std::invalid_argument("LatticeGeometry: mass2 must be > 0");
    }

    double epsilon() const { return 1.0 / n; }
    int sites() const { return n * n; }

    bool operator==(const LatticeGeometry& o) const { return n == o.n && mass2 == o.mass2; }
};

/// Integer frequency pair; the physical wave vector is k = 2*pi*(k1, k2).
struct DualIndex {
    int k1 = 0;
    int k2 = 0;
};

/// Maps a storage index m in [0, n) to the dual-set representative in (-n/2, n/2].
inline int fold_frequency(int m, int n) {
    return (2 * m <= n) ? m : m - n;
}

inline bool in_dual_set(DualIndex k, int n) {
    auto ok = [n](int c) { return 2 * c > -n && 2 * c <= n; };
    return ok(k.k1) && ok(k.k2);
}

/// Storage index of a dual-set frequency in the standard FFT layout.
inline int dual_storage_index(DualIndex k, int n) {
    if (!in_dual_set(k, n))
        throw std::out_of_range("dual index (" + std::to_string(k.k1) + "," +
                                std::to_string(k.k2) + ") outside the dual set for n=" +
                                std::to_string(n));
    int m1 = (k.k1 % n + n) % n;
    int m2 = (k.k2 % n + n) % n;
    return m1 * n + m2;
}

/// |k|^2 with continuum wave vectors k = 2*pi*(k1, k2).
inline double ksq_continuum(DualIndex k) {
    const double two_pi = 2.0 * M_PI;
    double a = two_pi * k.k1, b = two_pi * k.k2;
    return a * a + b * b;
}

}  // namespace pphi
