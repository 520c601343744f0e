#include "pphi/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace pphi {

double laplacian_multiplier(DualIndex k, const LatticeGeometry& geom) {
    if (!in_dual_set(k, geom.n))
        throw std::out_of_range("laplacian_multiplier: k outside dual set");
    const double n2 = static_cast<double>(geom.n) * geom.n;
    const double a1 = 2.0 * M_PI * k.k1 / geom.n;
    const double a2 = 2.0 * M_PI * k.k2 / geom.n;
    return n2 * ((2.0 - 2.0 * std::cos(a1)) + (2.0 - 2.0 * std::cos(a2)));
}

double laplacian_deficit(double x) {
    if (x == 0.0) return 0.0;
    return 1.0 - (2.0 - 2.0 * std::cos(x)) / (x * x);
}

double pv_covariance_scalar(double a, double t) {
    if (t == 0.0) return 0.0;
    if (std::isinf(t)) return 1.0 / a;
    return t / (t * a + 1.0);
}

double q_scalar(double a, double t) {
    if (std::isinf(t)) return 0.0;
    return 1.0 / (t * a + 1.0);
}

double q_time_integral_scalar(double a, double s, double t) {
    if (std::isinf(t))
        throw std::invalid_argument("q_time_integral_scalar: divergent at t = inf");
    return std::log((t * a + 1.0) / (s * a + 1.0)) / a;
}

double pv_covariance_multiplier(DualIndex k, double t, const LatticeGeometry& geom) {
    if (t < 0.0) throw std::invalid_argument("pv_covariance_multiplier: t < 0");
    return pv_covariance_scalar(laplacian_multiplier(k, geom) + geom.mass2, t);
}

double q_multiplier(DualIndex k, double t, const LatticeGeometry& geom) {
    if (t < 0.0) throw std::invalid_argument("q_multiplier: t < 0");
    return q_scalar(laplacian_multiplier(k, geom) + geom.mass2, t);
}

std::vector<double> laplacian_plus_mass(const LatticeGeometry& geom) {
    const int n = geom.n;
    std::vector<double> a(static_cast<size_t>(n) * n);
    std::vector<double> one_d(n);
    for (int m = 0; m < n; ++m)
        one_d[m] = static_cast<double>(n) * n * (2.0 - 2.0 * std::cos(2.0 * M_PI * m / n));
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2)
            a[static_cast<size_t>(m1) * n + m2] = one_d[m1] + one_d[m2] + geom.mass2;
    return a;
}

double variance_c_eps(const LatticeGeometry& geom) {
    double sum = 0.0;
    for (double a : laplacian_plus_mass(geom)) sum += 1.0 / a;
    return sum;
}

RealField apply_multiplier(const RealField& f,
                           const std::function<double(DualIndex)>& w) {
    const int n = f.geom.n;
    SpectralField g = forward_fft(f);
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2)
            g.coeffs[static_cast<size_t>(m1) * n + m2] *=
                w(DualIndex{fold_frequency(m1, n), fold_frequency(m2, n)});
    return inverse_fft(g);
}

SpectralField embed_spectrum(const SpectralField& f, int fine_n) {
    const int n = f.geom.n;
    if (fine_n < n || fine_n % n != 0)
        throw std::invalid_argument("embed_spectrum: fine_n must be a multiple of n");
    SpectralField out(LatticeGeometry(fine_n, f.geom.mass2));
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) {
            DualIndex k{fold_frequency(m1, n), fold_frequency(m2, n)};
            out.at(k) = f.coeffs[static_cast<size_t>(m1) * n + m2];
        }
    return out;
}

RealField embed_trig(const RealField& f, int fine_n) {
    // Real part of the one-sided zero-padded spectrum; equivalent to the
    // standard real trigonometric interpolant with Nyquist coefficients split
    // across their +/- images. Coarse lattice sites are reproduced exactly.
    return inverse_fft_real_part(embed_spectrum(forward_fft(f), fine_n));
}

SpectralField restrict_spectrum(const SpectralField& f_fine, int coarse_n) {
    const int fn = f_fine.geom.n;
    if (coarse_n > fn || fn % coarse_n != 0)
        throw std::invalid_argument("restrict_spectrum: coarse_n must divide fine n");
    const int n = coarse_n;
    SpectralField out(LatticeGeometry(n, f_fine.geom.mass2));
    // Keep frequencies in the closed square [-n/2, n/2]^2; on the Nyquist
    // boundary the +/- images alias to the same coarse mode and are summed,
    // so restriction inverts the real-space embedding exactly.
    for (int m1 = 0; m1 < fn; ++m1) {
        int c1 = fold_frequency(m1, fn);
        if (2 * c1 < -n || 2 * c1 > n) continue;
        for (int m2 = 0; m2 < fn; ++m2) {
            int c2 = fold_frequency(m2, fn);
            if (2 * c2 < -n || 2 * c2 > n) continue;
            const bool even = (n % 2 == 0);
            DualIndex k{even && 2 * c1 == -n ? n / 2 : c1,
                        even && 2 * c2 == -n ? n / 2 : c2};
            out.at(k) += f_fine.coeffs[static_cast<size_t>(m1) * fn + m2];
        }
    }
    return out;
}

RealField restrict_field(const RealField& f_fine, int coarse_n) {
    return inverse_fft(restrict_spectrum(forward_fft(f_fine), coarse_n));
}

}  // namespace pphi
