#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tspkit/signal.hpp"

namespace tspkit {

// Safeguarded frequency-domain division: bins of the denominator spectrum
// below a floor are raised to it before dividing, bounding noise
// amplification.
enum class SafeguardShaping { flat, smoothed_magnitude };

struct SafeguardConfig {
    double relative_floor_db = -60.0;  // floor relative to max |X[k]|
    SafeguardShaping shaping = SafeguardShaping::flat;
    double smoothing_bandwidth_octaves = 1.0 / 3.0;
};

// Returns X with every below-floor bin replaced by floor * e^{j arg X[k]}
// (phase 0 where X[k] is exactly zero). flat: one global floor from max |X|.
// smoothed_magnitude: per-bin floor from the octave-smoothed |X| envelope.
std::vector<std::complex<double>> safeguard_spectrum(
    const std::vector<std::complex<double>>& x, const SafeguardConfig& cfg);

// h = iDFT( DFT(y) / safeguard(DFT(x)) ) on a power-of-two buffer covering
// len(x) + ir_length and len(y); returns the first ir_length samples.
SampledSignal measure_ir_linear(const SampledSignal& x, const SampledSignal& y,
                                const SafeguardConfig& cfg, std::size_t ir_length);

// Circular variant for periodic excitation: x_period is one period of the
// stimulus, y_segment an equally long slice of the steady-state response.
SampledSignal measure_ir_circular(const SampledSignal& x_period, const SampledSignal& y_segment,
                                  const SafeguardConfig& cfg);

} // namespace tspkit
