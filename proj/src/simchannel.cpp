#include "tspkit/simchannel.hpp"

#include <cmath>
#include <numbers>

#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"
#include "tspkit/rng.hpp"

namespace tspkit {

SampledSignal synth_room_ir(const RoomIrSpec& spec, int sample_rate_hz) {
    if (sample_rate_hz <= 0) throw ConfigError("room ir: sample_rate_hz must be positive");
    if (!(spec.t60_s > 0.0)) throw ConfigError("room ir: t60_s must be positive");
    if (spec.direct_delay_s < 0.0 || spec.tail_onset_s < 0.0 || !(spec.length_s > 0.0))
        throw ConfigError("room ir: delays must be >= 0 and length_s > 0");

    const auto n = static_cast<std::size_t>(std::llround(spec.length_s * sample_rate_hz));
    const auto direct_at = static_cast<std::size_t>(std::llround(spec.direct_delay_s * sample_rate_hz));
    if (n == 0 || direct_at >= n)
        throw ConfigError("room ir: direct delay falls outside length_s");

    SampledSignal ir;
    ir.sample_rate_hz = sample_rate_hz;
    ir.samples.assign(n, 0.0);
    ir.samples[direct_at] = spec.direct_gain;

    if (spec.tail_gain != 0.0) {
        // Amplitude halves every t60/6.02... i.e. power drops 60 dB per t60.
        const double decay = 3.0 * std::numbers::ln10 / spec.t60_s;
        const std::size_t onset =
            direct_at + static_cast<std::size_t>(std::llround(spec.tail_onset_s * sample_rate_hz));
        Rng rng(spec.seed);
        for (std::size_t i = onset; i < n; ++i) {
            const double t = static_cast<double>(i - onset) / sample_rate_hz;
            ir.samples[i] += spec.tail_gain * std::exp(-decay * t) * rng.gaussian();
        }
    }
    return ir;
}

SampledSignal apply_channel(const SampledSignal& x, const SimulatedChannel& ch) {
    if (x.empty()) throw DegenerateInputError("apply_channel: empty input");
    if (x.sample_rate_hz <= 0) throw ConfigError("apply_channel: invalid sample rate");
    if (ch.fir.empty()) throw ConfigError("apply_channel: channel fir is empty");
    if (ch.noise_rms < 0.0) throw ConfigError("apply_channel: noise_rms must be >= 0");

    SampledSignal y;
    y.sample_rate_hz = x.sample_rate_hz;
    y.samples = fft_convolve(x.samples, ch.fir);

    switch (ch.nonlinearity.kind) {
    case NonlinearityKind::none:
        break;
    case NonlinearityKind::cubic: {
        const double c = ch.nonlinearity.cubic_coefficient;
        for (double& v : y.samples) v += c * v * v * v;
        break;
    }
    case NonlinearityKind::tanh_drive: {
        const double drive = ch.nonlinearity.tanh_drive;
        if (!(drive > 0.0)) throw ConfigError("apply_channel: tanh_drive must be positive");
        for (double& v : y.samples) v = std::tanh(drive * v) / drive;
        break;
    }
    }

    if (ch.drift) {
        if (!(ch.drift->gain_mod_period_s > 0.0))
            throw ConfigError("apply_channel: drift period must be positive");
        const double w = 2.0 * std::numbers::pi / ch.drift->gain_mod_period_s;
        for (std::size_t i = 0; i < y.samples.size(); ++i) {
            const double t = static_cast<double>(i) / x.sample_rate_hz;
            y.samples[i] *= 1.0 + ch.drift->gain_mod_depth * std::sin(w * t);
        }
    }

    if (ch.noise_rms > 0.0) {
        Rng rng(ch.seed);
        for (double& v : y.samples) v += ch.noise_rms * rng.gaussian();
    }
    return y;
}

} // namespace tspkit
