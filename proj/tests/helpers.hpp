#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "tspkit/rng.hpp"
#include "tspkit/signal.hpp"

namespace testutil {

// 10*log10(||a - b||^2 / ||b||^2); -inf-ish floor when both are zero.
inline double rel_error_db(const std::vector<double>& a, const std::vector<double>& b) {
    double err = 0.0, ref = 0.0;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double av = i < a.size() ? a[i] : 0.0;
        const double bv = i < b.size() ? b[i] : 0.0;
        err += (av - bv) * (av - bv);
        ref += bv * bv;
    }
    if (ref == 0.0) return err == 0.0 ? -999.0 : 999.0;
    if (err == 0.0) return -999.0;
    return 10.0 * std::log10(err / ref);
}

// O(n*m) reference convolution, deliberately independent of the FFT path.
inline std::vector<double> brute_conv(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// O(n^2) reference circular autocorrelation.
inline std::vector<double> brute_circ_autocorr(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t lag = 0; lag < n; ++lag)
        for (std::size_t i = 0; i < n; ++i) out[lag] += x[i] * x[(i + lag) % n];
    return out;
}

// O(n^2) reference DFT (one-sided), for checking the FFT wrapper.
inline std::vector<std::complex<double>> brute_rdft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * 3.14159265358979323846 * static_cast<double>(k) *
                               static_cast<double>(i) / static_cast<double>(n);
            acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

inline tspkit::SampledSignal make_delta(std::size_t n, std::size_t pos, double amp, int rate) {
    tspkit::SampledSignal s;
    s.sample_rate_hz = rate;
    s.samples.assign(n, 0.0);
    s.samples[pos] = amp;
    return s;
}

inline tspkit::SampledSignal make_noise(std::size_t n, std::uint64_t seed, int rate,
                                        double sigma = 1.0) {
    tspkit::Rng rng(seed);
    tspkit::SampledSignal s;
    s.sample_rate_hz = rate;
    s.samples.resize(n);
    for (auto& v : s.samples) v = sigma * rng.gaussian();
    return s;
}

} // namespace testutil
