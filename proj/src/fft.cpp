#include "tspkit/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace tspkit {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n) {
    if (n == 0) throw std::invalid_argument("rfft: n must be positive");
    std::vector<double> in(n, 0.0);
    std::copy_n(x.begin(), std::min(x.size(), n), in.begin());
    std::vector<std::complex<double>> out(n / 2 + 1);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
    if (n == 0) throw std::invalid_argument("irfft: n must be positive");
    if (spectrum.size() != n / 2 + 1)
        throw std::invalid_argument("irfft: spectrum size must be n/2 + 1");
    // c2r destroys its input; work on a copy.
    std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
    std::vector<double> out(n);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(in.data()),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(out_len);
    auto fa = rfft(a, n);
    auto fb = rfft(b, n);
    for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
    auto full = irfft(fa, n);
    full.resize(out_len);
    return full;
}

std::vector<double> circular_autocorrelation(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    auto fx = rfft(x, n);
    for (auto& c : fx) c = std::norm(c);
    return irfft(fx, n);
}

} // namespace tspkit
