#include "pphi/wick.hpp"

#include <cmath>
#include <stdexcept>

namespace pphi {

WickPolynomial::WickPolynomial(std::vector<double> a, double c, double e)
    : coeffs(std::move(a)), wick_variance(c), cutoff_e(e) {
    size_t eff = coeffs.size();
    while (eff > 0 && coeffs[eff - 1] == 0.0) --eff;
    // Interactions of effective degree >= 2 must be even with positive
    // leading coefficient (normalizability); degree <= 1 is a Gaussian tilt.
    if (eff >= 2) {
        if (eff % 2 != 0)
            throw std::invalid_argument("WickPolynomial: degree must be even");
        if (!(coeffs[eff - 1] > 0.0))
            throw std::invalid_argument("WickPolynomial: leading coefficient must be > 0");
    }
    if (!(wick_variance >= 0.0))
        throw std::invalid_argument("WickPolynomial: wick_variance must be >= 0");
    if (!(cutoff_e > 0.0))
        throw std::invalid_argument("WickPolynomial: cutoff_e must be > 0");
}

bool WickPolynomial::is_zero() const {
    for (double v : coeffs)
        if (v != 0.0) return false;
    return true;
}

double hermite(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite: n must be >= 0");
    if (n == 0) return 1.0;
    double hm = 1.0, h = x;
    for (int k = 1; k < n; ++k) {
        double next = x * h - k * hm;
        hm = h;
        h = next;
    }
    return h;
}

RealField wick_power(const RealField& f, int n, double c) {
    if (n < 1) throw std::invalid_argument("wick_power: n must be >= 1");
    if (c < 0.0) throw std::invalid_argument("wick_power: c must be >= 0");
    RealField out(f.geom);
    if (c == 0.0) {
        for (size_t i = 0; i < f.values.size(); ++i) out.values[i] = std::pow(f.values[i], n);
        return out;
    }
    const double s = std::sqrt(c), cn = std::pow(c, 0.5 * n);
    for (size_t i = 0; i < f.values.size(); ++i)
        out.values[i] = cn * hermite(n, f.values[i] / s);
    return out;
}

RealField wick_polynomial_field(const RealField& f, const WickPolynomial& p) {
    RealField out(f.geom);
    for (int k = 1; k <= p.degree(); ++k) {
        const double a = p.coeffs[k - 1];
        if (a == 0.0) continue;
        RealField pw = wick_power(f, k, p.wick_variance);
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += a * pw.values[i];
    }
    return out;
}

double v0(const RealField& f, const WickPolynomial& p) {
    RealField w = wick_polynomial_field(f, p);
    double s = 0.0;
    for (double v : w.values) s += v;
    return s / (static_cast<double>(f.geom.n) * f.geom.n);
}

namespace {

// Bridge slope 1 -> 0 over u in [0,1] with vanishing end derivatives, so
// chi is C^2 and concave: chi'(x) = 1 - sigma(u), sigma(u) = 3u^2 - 2u^3.
inline double bridge_value(double u) {
    // int_0^u (1 - sigma) dv = u - u^3 + u^4/2
    return u - u * u * u + 0.5 * u * u * u * u;
}

}  // namespace

double chi_e(double x, double e) {
    if (std::isinf(e)) return x;
    if (!(e > 0.0)) throw std::invalid_argument("chi_e: E must be > 0");
    if (x <= 0.5 * e) return x;
    if (x >= 1.5 * e) return e;
    return 0.5 * e + e * bridge_value((x - 0.5 * e) / e);
}

double chi_e_prime(double x, double e) {
    if (std::isinf(e)) return 1.0;
    if (!(e > 0.0)) throw std::invalid_argument("chi_e_prime: E must be > 0");
    if (x <= 0.5 * e) return 1.0;
    if (x >= 1.5 * e) return 0.0;
    const double u = (x - 0.5 * e) / e;
    return 1.0 - (3.0 * u * u - 2.0 * u * u * u);
}

double v0_cut(const RealField& f, const WickPolynomial& p) {
    return chi_e(v0(f, p), p.cutoff_e);
}

namespace {

// Monomial coefficients of :phi^n:_c, from the explicit Hermite expansion
// :phi^n: = sum_m (-1)^m n! / (m! (n-2m)! 2^m) c^m phi^(n-2m).
std::vector<double> wick_power_dense(int n, double c) {
    std::vector<double> out(static_cast<size_t>(n) + 1, 0.0);
    double coeff = 1.0;  // m = 0 term
    for (int m = 0; 2 * m <= n; ++m) {
        out[static_cast<size_t>(n - 2 * m)] = coeff;
        // ratio of consecutive terms: -(n-2m)(n-2m-1) c / (2(m+1))
        coeff *= -static_cast<double>(n - 2 * m) * (n - 2 * m - 1) * c / (2.0 * (m + 1));
    }
    return out;
}

}  // namespace

WickPolyDense wick_dense(const WickPolynomial& p) {
    WickPolyDense d;
    d.value.assign(static_cast<size_t>(p.degree()) + 1, 0.0);
    d.deriv.assign(static_cast<size_t>(std::max(p.degree(), 1)), 0.0);
    for (int k = 1; k <= p.degree(); ++k) {
        const double a = p.coeffs[k - 1];
        if (a == 0.0) continue;
        auto pw = wick_power_dense(k, p.wick_variance);
        for (size_t j = 0; j < pw.size(); ++j) d.value[j] += a * pw[j];
        if (k == 1) {
            d.deriv[0] += a;
        } else {
            auto dpw = wick_power_dense(k - 1, p.wick_variance);
            for (size_t j = 0; j < dpw.size(); ++j) d.deriv[j] += a * k * dpw[j];
        }
    }
    return d;
}

double horner(const std::vector<double>& coeffs, double x) {
    double r = 0.0;
    for (size_t j = coeffs.size(); j-- > 0;) r = r * x + coeffs[j];
    return r;
}

RealField grad_v0_cut(const RealField& f, const WickPolynomial& p) {
    RealField out(f.geom);
    if (p.is_zero()) return out;
    // :P'(f): = sum_k a_k k :f^(k-1):
    for (int k = 1; k <= p.degree(); ++k) {
        const double a = p.coeffs[k - 1];
        if (a == 0.0) continue;
        if (k == 1) {
            for (double& v : out.values) v += a;
        } else {
            RealField pw = wick_power(f, k - 1, p.wick_variance);
            for (size_t i = 0; i < out.values.size(); ++i)
                out.values[i] += a * k * pw.values[i];
        }
    }
    const double scale = chi_e_prime(v0(f, p), p.cutoff_e);
    out *= scale;
    return out;
}

}  // namespace pphi
