#include "tspkit/deconv.hpp"

#include <algorithm>
#include <cmath>

#include "tspkit/dsp_util.hpp"
#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"

namespace tspkit {

namespace {

void validate_cfg(const SafeguardConfig& cfg) {
    if (!(cfg.relative_floor_db < 0.0))
        throw ConfigError("safeguard: relative_floor_db must be < 0");
    if (cfg.shaping == SafeguardShaping::smoothed_magnitude &&
        !(cfg.smoothing_bandwidth_octaves > 0.0))
        throw ConfigError("safeguard: smoothing_bandwidth_octaves must be > 0");
}

std::complex<double> floored_bin(std::complex<double> v, double floor) {
    const double mag = std::abs(v);
    if (mag >= floor) return v;
    if (mag == 0.0) return {floor, 0.0};
    return std::polar(floor, std::arg(v));
}

std::vector<double> divide_spectra(const std::vector<std::complex<double>>& y,
                                   const std::vector<std::complex<double>>& x_safe,
                                   std::size_t n) {
    std::vector<std::complex<double>> q(x_safe.size());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = y[k] / x_safe[k];
    return irfft(q, n);
}

} // namespace

std::vector<std::complex<double>> safeguard_spectrum(
    const std::vector<std::complex<double>>& x, const SafeguardConfig& cfg) {
    validate_cfg(cfg);
    if (x.empty()) throw DegenerateInputError("safeguard: empty spectrum");

    double max_mag = 0.0;
    std::vector<double> mags(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        mags[k] = std::abs(x[k]);
        max_mag = std::max(max_mag, mags[k]);
    }
    if (max_mag == 0.0) throw DegenerateInputError("safeguard: all-zero spectrum");

    const double rel = linear_from_db(cfg.relative_floor_db);
    std::vector<std::complex<double>> out(x.size());
    if (cfg.shaping == SafeguardShaping::flat) {
        const double floor = max_mag * rel;
        for (std::size_t k = 0; k < x.size(); ++k) out[k] = floored_bin(x[k], floor);
    } else {
        auto envelope = octave_smooth(mags, cfg.smoothing_bandwidth_octaves);
        // A whole smoothing window of zero bins would give a zero floor;
        // back-stop so the division below stays finite.
        const double backstop = max_mag * 1e-12;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double floor = std::max(envelope[k] * rel, backstop);
            out[k] = floored_bin(x[k], floor);
        }
    }
    return out;
}

SampledSignal measure_ir_linear(const SampledSignal& x, const SampledSignal& y,
                                const SafeguardConfig& cfg, std::size_t ir_length) {
    validate_cfg(cfg);
    require_same_rate(x, y, "measure_ir_linear");
    if (x.empty()) throw DegenerateInputError("measure_ir_linear: empty excitation");
    if (ir_length == 0) throw ConfigError("measure_ir_linear: ir_length must be positive");
    if (y.size() < x.size())
        throw InsufficientDataError("measure_ir_linear: response shorter than excitation");

    const std::size_t n = next_pow2(std::max(y.size(), x.size() + ir_length));
    const auto fx = safeguard_spectrum(rfft(x.samples, n), cfg);
    const auto fy = rfft(y.samples, n);
    auto h = divide_spectra(fy, fx, n);
    h.resize(ir_length);

    SampledSignal out;
    out.samples = std::move(h);
    out.sample_rate_hz = x.sample_rate_hz;
    return out;
}

SampledSignal measure_ir_circular(const SampledSignal& x_period, const SampledSignal& y_segment,
                                  const SafeguardConfig& cfg) {
    validate_cfg(cfg);
    require_same_rate(x_period, y_segment, "measure_ir_circular");
    if (x_period.empty()) throw DegenerateInputError("measure_ir_circular: empty period");
    if (x_period.size() != y_segment.size())
        throw ConfigError("measure_ir_circular: segment length must equal the period");

    const std::size_t n = x_period.size();
    const auto fx = safeguard_spectrum(rfft(x_period.samples, n), cfg);
    const auto fy = rfft(y_segment.samples, n);

    SampledSignal out;
    out.samples = divide_spectra(fy, fx, n);
    out.sample_rate_hz = x_period.sample_rate_hz;
    return out;
}

} // namespace tspkit
