#include "pphi/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pphi {

namespace {

// Plans are created once per grid size under a lock (FFTW planning is not
// thread-safe); execution via the new-array interface is. FFTW_UNALIGNED so
// plans apply to any caller buffer.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair& plans_for(int n) {
    static std::map<int, PlanPair> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> scratch(static_cast<size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

}  // namespace

SpectralField forward_fft(const RealField& f) {
    const int n = f.geom.n;
    SpectralField out(f.geom);
    for (int i = 0; i < n * n; ++i) out.coeffs[i] = f.values[i];
    auto* buf = reinterpret_cast<fftw_complex*>(out.coeffs.data());
    fftw_execute_dft(plans_for(n).fwd, buf, buf);
    const double eps2 = 1.0 / (static_cast<double>(n) * n);
    for (auto& c : out.coeffs) c *= eps2;
    return out;
}

namespace {

std::vector<std::complex<double>> inverse_raw(const SpectralField& g) {
    const int n = g.geom.n;
    std::vector<std::complex<double>> buf = g.coeffs;
    auto* b = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans_for(n).bwd, b, b);
    return buf;
}

}  // namespace

RealField inverse_fft(const SpectralField& g) {
    auto buf = inverse_raw(g);
    double norm2 = 0.0, imag2 = 0.0;
    for (const auto& c : buf) {
        norm2 += std::norm(c);
        imag2 += c.imag() * c.imag();
    }
    if (imag2 > 1e-18 * norm2 && imag2 > 1e-280)
        throw std::runtime_error("inverse_fft: Hermitian symmetry violation (imaginary residue " +
                                 std::to_string(std::sqrt(imag2 / (norm2 > 0 ? norm2 : 1.0))) +
                                 " of field norm)");
    RealField out(g.geom);
    for (size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
    return out;
}

RealField inverse_fft_real_part(const SpectralField& g) {
    auto buf = inverse_raw(g);
    RealField out(g.geom);
    for (size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
    return out;
}

}  // namespace pphi
