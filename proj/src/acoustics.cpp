#include "tspkit/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tspkit/dsp_util.hpp"
#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"

namespace tspkit {

namespace {

constexpr double kTransitionOctaves = 0.125;
constexpr double kCapDb = 99.0;

double band_width_octaves(BandKind kind) {
    return kind == BandKind::octave ? 1.0 : 1.0 / 3.0;
}

// Smooth 0->1 power crossfade over one transition width centered on `edge`.
double rise(double f, double edge) {
    if (f <= 0.0) return 0.0;
    const double u = std::log2(f / edge) / kTransitionOctaves + 0.5;
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double s = std::sin(std::numbers::pi / 2.0 * u);
    return s * s;
}

double mask_power(double f, const Band& band) {
    const double up = band.extend_down ? 1.0 : rise(f, band.lo_hz);
    const double down = band.extend_up ? 0.0 : rise(f, band.hi_hz);
    return up * (1.0 - down);
}

// Bin index range [lo, hi) a band occupies on an n-point grid, honoring the
// edge-band extensions.
std::pair<std::size_t, std::size_t> band_bin_range(const Band& band, int rate, std::size_t n) {
    const std::size_t bins = n / 2 + 1;
    const double hz_per_bin = static_cast<double>(rate) / static_cast<double>(n);
    std::size_t lo = band.extend_down
                         ? 0
                         : static_cast<std::size_t>(std::ceil(band.lo_hz / hz_per_bin));
    std::size_t hi = band.extend_up
                         ? bins
                         : std::min(bins, static_cast<std::size_t>(
                                              std::ceil(band.hi_hz / hz_per_bin)));
    lo = std::min(lo, bins);
    return {lo, hi};
}

} // namespace

std::vector<Band> make_bands(const BandSpec& spec, int sample_rate_hz) {
    if (sample_rate_hz <= 0) throw ConfigError("bands: sample_rate_hz must be positive");
    const double nyquist = sample_rate_hz / 2.0;
    if (!(spec.f_min_hz > 0.0) || !(spec.f_min_hz < spec.f_max_hz) || spec.f_max_hz > nyquist)
        throw ConfigError("bands: need 0 < f_min < f_max <= Nyquist");

    const double w = band_width_octaves(spec.kind);
    const double step = w;           // centers are one band width apart
    const double half = w / 2.0;

    std::vector<Band> bands;
    // Centers at 1000 * 2^(m*step); scan a generous range.
    const int m_lo = static_cast<int>(std::floor(std::log2(spec.f_min_hz / 1000.0) / step)) - 1;
    const int m_hi = static_cast<int>(std::ceil(std::log2(spec.f_max_hz / 1000.0) / step)) + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double center = 1000.0 * std::exp2(m * step);
        if (center < spec.f_min_hz || center > spec.f_max_hz) continue;
        Band b;
        b.center_hz = center;
        b.lo_hz = center * std::exp2(-half);
        b.hi_hz = center * std::exp2(half);
        if (b.hi_hz > nyquist) continue;
        b.label = std::to_string(std::llround(center));
        bands.push_back(std::move(b));
    }
    if (bands.empty()) throw ConfigError("bands: no band fits the requested range");
    bands.front().extend_down = true;
    bands.back().extend_up = true;
    return bands;
}

SampledSignal bandpass(const SampledSignal& x, const Band& band) {
    if (x.empty()) throw DegenerateInputError("bandpass: empty signal");
    const std::size_t n = x.size();
    auto spectrum = rfft(x.samples, n);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double f = static_cast<double>(k) * x.sample_rate_hz / static_cast<double>(n);
        spectrum[k] *= std::sqrt(mask_power(f, band));
    }
    SampledSignal out;
    out.sample_rate_hz = x.sample_rate_hz;
    out.samples = irfft(spectrum, n);
    return out;
}

std::vector<double> freq_response(const SampledSignal& ir, double smoothing_octaves) {
    if (ir.empty()) throw DegenerateInputError("freq_response: empty signal");
    const auto spectrum = rfft(ir.samples, ir.size());
    std::vector<double> power(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) power[k] = std::norm(spectrum[k]);
    if (smoothing_octaves > 0.0) power = octave_smooth(power, smoothing_octaves);
    std::vector<double> db(power.size());
    for (std::size_t k = 0; k < power.size(); ++k) db[k] = power_db_or_floor(power[k]);
    return db;
}

DecayCurve schroeder_decay(const SampledSignal& ir) {
    if (ir.empty()) throw DegenerateInputError("schroeder: empty impulse response");
    if (ir.sample_rate_hz <= 0) throw ConfigError("schroeder: invalid sample rate");
    const std::size_t n = ir.size();
    std::vector<double> tail(n);
    double acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        acc += ir.samples[i] * ir.samples[i];
        tail[i] = acc;
    }
    if (tail[0] <= 0.0) throw DegenerateInputError("schroeder: zero-energy impulse response");

    DecayCurve curve;
    curve.sample_period_s = 1.0 / ir.sample_rate_hz;
    curve.level_db.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        curve.level_db[i] = power_db_or_floor(tail[i] / tail[0]);
    return curve;
}

DecayCurve schroeder_decay(const SampledSignal& ir, const Band& band) {
    if (ir.empty()) throw DegenerateInputError("schroeder: empty impulse response");
    if (ir.sample_rate_hz <= 0) throw ConfigError("schroeder: invalid sample rate");
    const auto filtered = bandpass(ir, band);

    // The zero-phase filter rings acausally around the direct sound; on a
    // circular response that ringing wraps to the end of the buffer and floors
    // the backward integral. Follow the circle from the direct peak and leave
    // a one-eighth guard for the wrapped ringing.
    const std::size_t n = ir.size();
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(ir.samples[i]) > std::abs(ir.samples[peak])) peak = i;
    const std::size_t keep = std::max<std::size_t>(2, n - n / 8);

    SampledSignal window;
    window.sample_rate_hz = ir.sample_rate_hz;
    window.samples.resize(keep);
    for (std::size_t i = 0; i < keep; ++i)
        window.samples[i] = filtered.samples[(peak + i) % n];
    return schroeder_decay(window);
}

double estimate_rt(const DecayCurve& curve, RtMethod method) {
    const double fit_floor = method == RtMethod::T20 ? -25.0 : -35.0;
    const double fit_ceiling = -5.0;

    // The final stretch of a backward integration only reflects the shrinking
    // integration interval, so it is ignored.
    const std::size_t usable = curve.level_db.size() - curve.level_db.size() / 10;
    if (usable < 2 || !(curve.sample_period_s > 0.0))
        throw InsufficientRangeError("estimate_rt: decay curve too short", 0.0);

    double min_level = 0.0;
    for (std::size_t i = 0; i < usable; ++i) min_level = std::min(min_level, curve.level_db[i]);
    if (min_level > fit_floor)
        throw InsufficientRangeError("estimate_rt: decay range below the fit floor",
                                     -min_level);

    std::vector<double> t, level;
    for (std::size_t i = 0; i < usable; ++i) {
        const double v = curve.level_db[i];
        if (v <= fit_ceiling && v >= fit_floor) {
            t.push_back(static_cast<double>(i) * curve.sample_period_s);
            level.push_back(v);
        }
    }
    if (t.size() < 2)
        throw InsufficientRangeError("estimate_rt: too few samples in the fit window",
                                     -min_level);
    const auto fit = fit_line(t, level);
    if (!(fit.slope < 0.0))
        throw DegenerateInputError("estimate_rt: decay does not descend in the fit window");
    return -60.0 / fit.slope;
}

DirectIndirect split_direct_indirect(const SampledSignal& ir, double direct_window_ms) {
    if (ir.empty()) throw DegenerateInputError("split: empty impulse response");
    if (ir.sample_rate_hz <= 0) throw ConfigError("split: invalid sample rate");
    if (!(direct_window_ms > 0.0) ||
        (0.5 + direct_window_ms) / 1000.0 >= ir.duration_s())
        throw ConfigError("split: direct window must be positive and shorter than the response");

    std::vector<double> mag(ir.size());
    for (std::size_t i = 0; i < ir.size(); ++i) mag[i] = std::abs(ir.samples[i]);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < mag.size(); ++i)
        if (mag[i] > mag[peak]) peak = i;
    const double floor = median(mag);
    if (mag[peak] <= 0.0 || mag[peak] < 8.0 * floor)
        throw DetectionError("split: no detectable peak above the noise floor");

    const auto pre = static_cast<std::size_t>(std::llround(0.0005 * ir.sample_rate_hz));
    const auto post = static_cast<std::size_t>(std::llround(direct_window_ms * 1e-3 * ir.sample_rate_hz));
    const std::size_t lo = peak >= pre ? peak - pre : 0;
    const std::size_t hi = std::min(ir.size() - 1, peak + post);

    DirectIndirect out;
    out.peak_index = peak;
    double total = 0.0;
    for (std::size_t i = 0; i < ir.size(); ++i) {
        const double e = ir.samples[i] * ir.samples[i];
        total += e;
        if (i >= lo && i <= hi) out.direct_energy += e;
    }
    out.indirect_energy = std::max(0.0, total - out.direct_energy);
    if (out.indirect_energy <= 0.0)
        out.drr_db = kCapDb;
    else
        out.drr_db = std::clamp(10.0 * std::log10(out.direct_energy / out.indirect_energy),
                                -kCapDb, kCapDb);
    return out;
}

std::vector<BandValue> band_snr(const Decomposition& d, const BandSpec& bands) {
    if (d.lti_ir.empty()) throw DegenerateInputError("band_snr: empty decomposition");
    const std::size_t n = d.lti_ir.size();
    const std::size_t bins = n / 2 + 1;
    if (d.lti_spectrum.size() != bins || d.rtv_power_spectrum.size() != bins)
        throw ConfigError("band_snr: decomposition spectra sizes are inconsistent");

    std::vector<BandValue> out;
    for (const auto& band : make_bands(bands, d.lti_ir.sample_rate_hz)) {
        const auto [lo, hi] = band_bin_range(band, d.lti_ir.sample_rate_hz, n);
        if (lo >= hi) continue;
        double sig = 0.0, noise = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            sig += std::norm(d.lti_spectrum[k]);
            noise += d.rtv_power_spectrum[k];
        }
        double snr;
        if (noise <= 0.0)
            snr = kCapDb;
        else if (sig <= 0.0)
            snr = -kCapDb;
        else
            snr = std::clamp(10.0 * std::log10(sig / noise), -kCapDb, kCapDb);
        out.push_back({band.label, snr});
    }
    return out;
}

double reverberation_radius(double drr_db, double source_distance_m) {
    if (!(source_distance_m > 0.0))
        throw ConfigError("reverberation_radius: source distance must be positive");
    if (!std::isfinite(drr_db))
        throw ConfigError("reverberation_radius: drr must be finite");
    return source_distance_m * linear_from_db(drr_db);
}

bool placement_verdict(double source_distance_m, double reverberation_radius_m) {
    return source_distance_m < reverberation_radius_m / 2.0;
}

AcousticReport analyze(const Decomposition& d, const AnalyzeOptions& opts) {
    if (d.lti_ir.empty()) throw DegenerateInputError("analyze: empty decomposition");

    AcousticReport report;
    report.sample_rate_hz = d.lti_ir.sample_rate_hz;
    report.n_fft = d.lti_ir.size();
    report.lti_magnitude_db = freq_response(d.lti_ir, opts.response_smoothing_octaves);
    report.band_snr_db = band_snr(d, opts.bands);

    report.decay_curves.push_back({"full", schroeder_decay(d.lti_ir)});
    const auto bands = make_bands(opts.bands, d.lti_ir.sample_rate_hz);
    for (const auto& band : bands) {
        const auto [lo, hi] = band_bin_range(band, d.lti_ir.sample_rate_hz, d.lti_ir.size());
        if (lo >= hi) continue;
        report.decay_curves.push_back({band.label, schroeder_decay(d.lti_ir, band)});
    }

    for (const auto& named : report.decay_curves) {
        BandRt rt;
        rt.label = named.label;
        for (auto method : {RtMethod::T20, RtMethod::T30}) {
            try {
                const double seconds = estimate_rt(named.curve, method);
                (method == RtMethod::T20 ? rt.t20_s : rt.t30_s) = seconds;
            } catch (const InsufficientRangeError&) {
            }
        }
        report.rt_seconds.push_back(std::move(rt));
    }

    const auto split = split_direct_indirect(d.lti_ir, opts.direct_window_ms);
    report.drr_db = split.drr_db;
    report.direct_peak_index = split.peak_index;

    if (opts.source_distance_m) {
        report.source_distance_m = opts.source_distance_m;
        report.reverberation_radius_m = reverberation_radius(split.drr_db, *opts.source_distance_m);
        report.placement_ok = placement_verdict(*opts.source_distance_m,
                                                *report.reverberation_radius_m);
    }
    return report;
}

} // namespace tspkit
