#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "tspkit/signal.hpp"

namespace tspkit {

// CAPRICEP unit TSP: an all-pass spectrum whose group delay is a seeded sum of
// Gaussian bumps, brought to the time domain, circularly centered and
// truncated. Different seeds give near-orthogonal units.
struct CapricepSpec {
    std::size_t fft_length = 65536;       // power of two
    int n_sections = 200;                 // group-delay bumps
    double gd_sigma_samples = 256.0;      // bump width on the DFT bin axis
    double gd_magnitude_samples = 400.0;  // bump peak (group delay, samples)
    std::uint64_t seed = 1;
    std::size_t effective_length = 8192;  // truncation length
};

struct CapricepUnit {
    SampledSignal signal;
    // Fraction of total energy removed by truncation and edge tapering.
    double truncated_energy_fraction = 0.0;
};

// The designed unit-magnitude spectrum (fft_length/2 + 1 bins), before any
// truncation. Exposed so the all-pass property can be checked directly.
std::vector<std::complex<double>> capricep_allpass_spectrum(const CapricepSpec& spec);

CapricepUnit gen_unit_capricep(const CapricepSpec& spec, int sample_rate_hz);

enum class SweepLaw { logarithmic, linear };

struct SweptSineSpec {
    double f_start_hz = 20.0;
    double f_end_hz = 20000.0;
    double duration_s = 1.0;
    SweepLaw sweep_law = SweepLaw::logarithmic;
};

SampledSignal gen_swept_sine(const SweptSineSpec& spec, int sample_rate_hz);

// Maximal-length sequence (+-1 valued, length 2^order - 1) from a fixed
// primitive polynomial per order; orders 2..24.
SampledSignal gen_mls(int order, int sample_rate_hz = 44100);

// Sinusoid whose measured RMS is exactly 10^(rms_level_dbfs/20).
SampledSignal gen_calibration_tone(double freq_hz, double rms_level_dbfs, double duration_s,
                                   int sample_rate_hz);

// Structured test signal | 3 s silence | calibration tone, with the segment
// layout recorded for the sidecar.
struct FieldTestSignal {
    SampledSignal signal;
    std::vector<SegmentMarker> segments;
};

FieldTestSignal gen_field_test_signal(const SampledSignal& structured_waveform,
                                      const SampledSignal& calibration);

} // namespace tspkit
