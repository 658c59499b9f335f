#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tspkit/decompose.hpp"
#include "tspkit/signal.hpp"

namespace tspkit {

enum class BandKind { octave, third_octave };

// Describes a filter bank: octave or third-octave bands whose centers fall
// inside [f_min_hz, f_max_hz].
struct BandSpec {
    BandKind kind = BandKind::octave;
    double f_min_hz = 50.0;
    double f_max_hz = 16000.0;
};

struct Band {
    std::string label;
    double center_hz = 0.0;
    double lo_hz = 0.0;
    double hi_hz = 0.0;
    // Edge bands of a bank absorb everything below/above so the bank covers
    // the whole axis and band energies sum to the total exactly.
    bool extend_down = false;
    bool extend_up = false;
};

std::vector<Band> make_bands(const BandSpec& spec, int sample_rate_hz);

// Zero-phase band-pass: a real spectral mask with sin^2/cos^2 power crossfades
// (1/8 octave wide) at the band edges, so a bank built by make_bands is
// power-complementary.
SampledSignal bandpass(const SampledSignal& x, const Band& band);

// DFT magnitude in dB per one-sided bin, optionally smoothed with a
// power-domain moving average of the given fractional-octave width.
std::vector<double> freq_response(const SampledSignal& ir, double smoothing_octaves = 0.0);

// Backward-integrated energy decay, 0 dB at t = 0.
struct DecayCurve {
    double sample_period_s = 0.0;
    std::vector<double> level_db;
};

DecayCurve schroeder_decay(const SampledSignal& ir);

// Band-limited variant. Treats the response as circular: integration starts
// at the direct peak and stops one-eighth of the buffer early, where the
// wrapped acausal ringing of the zero-phase band filter lives.
DecayCurve schroeder_decay(const SampledSignal& ir, const Band& band);

enum class RtMethod { T20, T30 };

// Line fit over [-5, -25] dB (T20) or [-5, -35] dB (T30), extrapolated to
// -60 dB. Throws InsufficientRangeError when the curve does not reach the
// fit floor.
double estimate_rt(const DecayCurve& curve, RtMethod method);

struct DirectIndirect {
    double direct_energy = 0.0;
    double indirect_energy = 0.0;
    double drr_db = 0.0;  // capped at +-99
    std::size_t peak_index = 0;
};

DirectIndirect split_direct_indirect(const SampledSignal& ir, double direct_window_ms = 2.5);

struct BandValue {
    std::string label;
    double value_db = 0.0;
};

// Per band: 10*log10(sum |LTI|^2 / sum RTV) over the band's bins, capped at
// +99 dB when the band's RTV is zero. Bands containing no bins are omitted.
std::vector<BandValue> band_snr(const Decomposition& d, const BandSpec& bands);

// Point-source model: the distance at which direct and diffuse levels match.
double reverberation_radius(double drr_db, double source_distance_m);

// Placement rule: microphone distance strictly under half the radius.
bool placement_verdict(double source_distance_m, double reverberation_radius_m);

struct NamedDecayCurve {
    std::string label;  // "full" or a band label
    DecayCurve curve;
};

struct BandRt {
    std::string label;
    std::optional<double> t20_s;
    std::optional<double> t30_s;
};

struct AcousticReport {
    int sample_rate_hz = 0;
    std::size_t n_fft = 0;  // bins of lti_magnitude_db map to k * rate / n_fft
    std::vector<double> lti_magnitude_db;
    std::vector<BandValue> band_snr_db;
    std::vector<NamedDecayCurve> decay_curves;
    std::vector<BandRt> rt_seconds;
    double drr_db = 0.0;
    std::size_t direct_peak_index = 0;
    std::optional<double> source_distance_m;
    std::optional<double> reverberation_radius_m;
    std::optional<bool> placement_ok;
};

struct AnalyzeOptions {
    BandSpec bands;
    double direct_window_ms = 2.5;
    double response_smoothing_octaves = 0.0;
    std::optional<double> source_distance_m;
};

AcousticReport analyze(const Decomposition& d, const AnalyzeOptions& opts);

} // namespace tspkit
