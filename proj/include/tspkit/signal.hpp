#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tspkit/errors.hpp"

namespace tspkit {

// Real-valued waveform plus sample rate. The universal carrier for test
// signals, recordings, and impulse responses. Amplitudes are full-scale
// normalized (dimensionless).
struct SampledSignal {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration_s() const {
        return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
    }
};

// Labeled span inside a longer signal (used by the field test signal).
struct SegmentMarker {
    std::string label;
    std::size_t start = 0;
    std::size_t length = 0;
};

inline double peak_abs(const std::vector<double>& x) {
    double p = 0.0;
    for (double v : x) p = std::max(p, std::abs(v));
    return p;
}

inline double signal_energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

inline double rms(const std::vector<double>& x) {
    return x.empty() ? 0.0 : std::sqrt(signal_energy(x) / static_cast<double>(x.size()));
}

inline double db_from_linear(double a) { return 20.0 * std::log10(a); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 20.0); }

// dB floor used wherever a log of zero would otherwise appear in outputs.
inline constexpr double kDbFloor = -400.0;

inline double power_db_or_floor(double p) {
    return p > 0.0 ? 10.0 * std::log10(p) : kDbFloor;
}

inline void require_same_rate(const SampledSignal& a, const SampledSignal& b, const char* what) {
    if (a.sample_rate_hz != b.sample_rate_hz)
        throw ConfigError(std::string(what) + ": sample-rate mismatch (" +
                          std::to_string(a.sample_rate_hz) + " vs " +
                          std::to_string(b.sample_rate_hz) + ")");
}

} // namespace tspkit
