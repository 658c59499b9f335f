#include "tspkit/signal_gen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "tspkit/dsp_util.hpp"
#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"
#include "tspkit/rng.hpp"

namespace tspkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_capricep(const CapricepSpec& spec) {
    if (!is_pow2(spec.fft_length) || spec.fft_length < 2)
        throw ConfigError("capricep: fft_length must be a power of two >= 2");
    if (spec.n_sections < 1) throw ConfigError("capricep: n_sections must be >= 1");
    if (!(spec.gd_sigma_samples > 0.0)) throw ConfigError("capricep: gd_sigma_samples must be > 0");
    if (spec.effective_length == 0 || spec.effective_length > spec.fft_length)
        throw ConfigError("capricep: effective_length must be in [1, fft_length]");
}

void require_rate(int sample_rate_hz) {
    if (sample_rate_hz <= 0) throw ConfigError("sample_rate_hz must be positive");
}

} // namespace

std::vector<std::complex<double>> capricep_allpass_spectrum(const CapricepSpec& spec) {
    validate_capricep(spec);
    const std::size_t n = spec.fft_length;
    const std::size_t bins = n / 2 + 1;

    // Group delay (in samples) over the one-sided bin axis: a seeded sum of
    // Gaussian bumps with random center bins and random polarity.
    std::vector<double> gd(bins, 0.0);
    Rng rng(spec.seed);
    for (int s = 0; s < spec.n_sections; ++s) {
        const double center = rng.uniform(0.0, static_cast<double>(n / 2));
        const double pol = rng.sign();
        const double amp = pol * spec.gd_magnitude_samples;
        const double inv_sigma = 1.0 / spec.gd_sigma_samples;
        for (std::size_t k = 0; k < bins; ++k) {
            const double z = (static_cast<double>(k) - center) * inv_sigma;
            gd[k] += amp * std::exp(-0.5 * z * z);
        }
    }

    // phase[k] = -integral of group delay over angular frequency; one bin step
    // is 2*pi/n radians.
    const auto gd_integral = cumulative_trapezoid(gd);
    std::vector<std::complex<double>> spectrum(bins);
    spectrum[0] = 1.0;
    for (std::size_t k = 1; k + 1 < bins; ++k) {
        const double phase = -kTwoPi / static_cast<double>(n) * gd_integral[k];
        spectrum[k] = std::polar(1.0, phase);
    }
    // The Nyquist bin of a real signal must be real; snap to the nearer sign.
    const double nyq_phase = -kTwoPi / static_cast<double>(n) * gd_integral[bins - 1];
    spectrum[bins - 1] = std::cos(nyq_phase) >= 0.0 ? 1.0 : -1.0;
    return spectrum;
}

CapricepUnit gen_unit_capricep(const CapricepSpec& spec, int sample_rate_hz) {
    require_rate(sample_rate_hz);
    const auto spectrum = capricep_allpass_spectrum(spec);
    const std::size_t n = spec.fft_length;
    const auto full = irfft(spectrum, n);

    // Energy centroid on the circle; the signal wraps around, so the centroid
    // is the angle of the energy-weighted sum of unit vectors.
    std::complex<double> z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        z += full[i] * full[i] *
             std::polar(1.0, kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    double pos = std::arg(z) / kTwoPi * static_cast<double>(n);
    pos = std::fmod(pos + static_cast<double>(n), static_cast<double>(n));
    const std::size_t centroid = static_cast<std::size_t>(std::llround(pos)) % n;

    // Rotate the centroid to n/2, then cut the middle effective_length samples.
    const std::size_t l = spec.effective_length;
    const std::size_t start = n / 2 - l / 2;
    std::vector<double> window(l);
    for (std::size_t i = 0; i < l; ++i)
        window[i] = full[(start + i + centroid + n / 2) % n];

    apply_edge_tapers(window, static_cast<std::size_t>(std::llround(0.01 * static_cast<double>(l))));

    const double e_full = signal_energy(full);
    const double e_kept = signal_energy(window);

    const double peak = peak_abs(window);
    if (peak <= 0.0) throw DegenerateInputError("capricep: truncated window has no energy");
    for (double& v : window) v /= peak;

    CapricepUnit unit;
    unit.signal.samples = std::move(window);
    unit.signal.sample_rate_hz = sample_rate_hz;
    unit.truncated_energy_fraction = 1.0 - e_kept / e_full;
    return unit;
}

SampledSignal gen_swept_sine(const SweptSineSpec& spec, int sample_rate_hz) {
    require_rate(sample_rate_hz);
    if (!(spec.f_start_hz > 0.0)) throw ConfigError("sweep: f_start_hz must be > 0");
    if (spec.f_end_hz < spec.f_start_hz)
        throw ConfigError("sweep: f_end_hz must be >= f_start_hz");
    if (spec.f_end_hz >= sample_rate_hz / 2.0)
        throw ConfigError("sweep: f_end_hz must be below Nyquist");
    const auto length = static_cast<std::size_t>(std::llround(spec.duration_s * sample_rate_hz));
    if (!(spec.duration_s > 0.0) || length == 0)
        throw ConfigError("sweep: duration_s too short for the sample rate");

    const double f0 = spec.f_start_hz, f1 = spec.f_end_hz, t_total = spec.duration_s;
    SampledSignal out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        double phase;
        if (f1 == f0) {
            phase = kTwoPi * f0 * t;
        } else if (spec.sweep_law == SweepLaw::linear) {
            phase = kTwoPi * (f0 * t + (f1 - f0) * t * t / (2.0 * t_total));
        } else {
            const double k = t_total / std::log(f1 / f0);
            phase = kTwoPi * f0 * k * (std::exp(t / k) - 1.0);
        }
        out.samples[i] = std::sin(phase);
    }
    const double peak = peak_abs(out.samples);
    for (double& v : out.samples) v /= peak;
    return out;
}

SampledSignal gen_mls(int order, int sample_rate_hz) {
    require_rate(sample_rate_hz);
    if (order < 2 || order > 24)
        throw ConfigError("mls: order must be in [2, 24]");

    // One fixed primitive polynomial per order (feedback tap positions).
    static constexpr std::array<std::array<int, 4>, 25> taps = {{
        {}, {}, {2, 1}, {3, 2}, {4, 3}, {5, 3}, {6, 5}, {7, 6},
        {8, 6, 5, 4}, {9, 5}, {10, 7}, {11, 9}, {12, 6, 4, 1},
        {13, 4, 3, 1}, {14, 5, 3, 1}, {15, 14}, {16, 15, 13, 4},
        {17, 14}, {18, 11}, {19, 6, 2, 1}, {20, 17}, {21, 19},
        {22, 21}, {23, 18}, {24, 23, 22, 17},
    }};
    // Right-shift Fibonacci register, output at bit 0: a polynomial tap at
    // exponent t reads register bit order - t.
    std::uint32_t mask = 0;
    for (int t : taps[static_cast<std::size_t>(order)])
        if (t > 0) mask |= 1u << (order - t);

    const std::size_t length = (std::size_t{1} << order) - 1;
    SampledSignal out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(length);
    std::uint32_t reg = 1;
    for (std::size_t i = 0; i < length; ++i) {
        out.samples[i] = (reg & 1u) ? 1.0 : -1.0;
        const auto fb = static_cast<std::uint32_t>(std::popcount(reg & mask) & 1);
        reg = (reg >> 1) | (fb << (order - 1));
    }
    return out;
}

SampledSignal gen_calibration_tone(double freq_hz, double rms_level_dbfs, double duration_s,
                                   int sample_rate_hz) {
    require_rate(sample_rate_hz);
    if (!(freq_hz > 0.0) || freq_hz >= sample_rate_hz / 2.0)
        throw ConfigError("tone: freq_hz must be in (0, Nyquist)");
    if (rms_level_dbfs > 0.0)
        throw ConfigError("tone: rms_level_dbfs must be <= 0");
    const auto length = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (!(duration_s > 0.0) || length == 0)
        throw ConfigError("tone: duration_s too short for the sample rate");

    SampledSignal out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(length);
    for (std::size_t i = 0; i < length; ++i)
        out.samples[i] = std::sin(kTwoPi * freq_hz * static_cast<double>(i) / sample_rate_hz);
    // Scale so the measured RMS hits the requested level exactly; an integer
    // number of cycles is not assumed.
    const double measured = rms(out.samples);
    if (measured <= 0.0) throw DegenerateInputError("tone: zero RMS");
    const double scale = linear_from_db(rms_level_dbfs) / measured;
    for (double& v : out.samples) v *= scale;
    return out;
}

FieldTestSignal gen_field_test_signal(const SampledSignal& structured_waveform,
                                      const SampledSignal& calibration) {
    require_same_rate(structured_waveform, calibration, "field test signal");
    const auto rate = static_cast<std::size_t>(structured_waveform.sample_rate_hz);
    const std::size_t n_silence = 3 * rate;
    const std::size_t n_structured = structured_waveform.size();
    const std::size_t n_tone = calibration.size();

    FieldTestSignal out;
    out.signal.sample_rate_hz = structured_waveform.sample_rate_hz;
    out.signal.samples.reserve(n_structured + n_silence + n_tone);
    out.signal.samples.insert(out.signal.samples.end(), structured_waveform.samples.begin(),
                              structured_waveform.samples.end());
    out.signal.samples.insert(out.signal.samples.end(), n_silence, 0.0);
    out.signal.samples.insert(out.signal.samples.end(), calibration.samples.begin(),
                              calibration.samples.end());
    out.segments = {
        {"structured", 0, n_structured},
        {"silence", n_structured, n_silence},
        {"calibration", n_structured + n_silence, n_tone},
    };
    return out;
}

} // namespace tspkit
