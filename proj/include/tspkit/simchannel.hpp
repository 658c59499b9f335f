#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tspkit/signal.hpp"

namespace tspkit {

// Ground-truth measurement target: FIR room response, then a memoryless
// nonlinearity, then slow gain drift, plus additive white Gaussian noise.
enum class NonlinearityKind { none, cubic, tanh_drive };

struct Nonlinearity {
    NonlinearityKind kind = NonlinearityKind::none;
    double cubic_coefficient = 0.0;  // y = x + c * x^3
    double tanh_drive = 1.0;         // y = tanh(drive * x) / drive
};

struct DriftSpec {
    double gain_mod_depth = 0.0;     // gain(t) = 1 + depth * sin(2*pi*t/period)
    double gain_mod_period_s = 1.0;
};

struct SimulatedChannel {
    std::vector<double> fir;
    Nonlinearity nonlinearity;
    double noise_rms = 0.0;
    std::optional<DriftSpec> drift;
    std::uint64_t seed = 0;
};

// Synthetic room IR: a direct impulse plus an exponentially decaying seeded
// Gaussian tail whose decay rate matches t60_s.
struct RoomIrSpec {
    double direct_delay_s = 0.005;
    double direct_gain = 1.0;
    double t60_s = 0.5;
    double tail_gain = 0.3;
    double tail_onset_s = 0.005;  // delay of the tail past the direct sound
    double length_s = 1.0;
    std::uint64_t seed = 1;
};

SampledSignal synth_room_ir(const RoomIrSpec& spec, int sample_rate_hz);

// y = noise + drift_gain(t) * NL(fir (*) x); full linear convolution, output
// length len(x) + len(fir) - 1.
SampledSignal apply_channel(const SampledSignal& x, const SimulatedChannel& ch);

} // namespace tspkit
