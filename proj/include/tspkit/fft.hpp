#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tspkit {

// Real-input FFT helpers backed by FFTW (double precision). All functions are
// thread-safe; plan creation is serialized internally.

// Forward transform of x zero-padded (or truncated) to n points.
// Returns the one-sided spectrum, n/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n);

// Inverse of the one-sided spectrum back to n real samples (1/n normalized).
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

std::size_t next_pow2(std::size_t n);
bool is_pow2(std::size_t n);

// Linear convolution via FFT, output length a.size() + b.size() - 1.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

// Circular autocorrelation (lag 0..n-1) of x, any length. FFT-based.
std::vector<double> circular_autocorrelation(std::span<const double> x);

} // namespace tspkit
