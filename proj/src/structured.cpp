#include "tspkit/structured.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"

namespace tspkit {

std::vector<std::vector<int>> walsh_hadamard(std::size_t order) {
    if (!is_pow2(order))
        throw ConfigError("walsh_hadamard: order must be a power of two");
    std::vector<std::vector<int>> h(order, std::vector<int>(order, 1));
    for (std::size_t block = 1; block < order; block <<= 1)
        for (std::size_t i = 0; i < block; ++i)
            for (std::size_t j = 0; j < block; ++j) {
                h[i + block][j] = h[i][j];
                h[i][j + block] = h[i][j];
                h[i + block][j + block] = -h[i][j];
            }
    return h;
}

StructuredTestSignal compose_structured(const std::vector<SampledSignal>& units,
                                        std::size_t period_samples, std::size_t repetitions) {
    const std::size_t m = units.size();
    if (!is_pow2(m))
        throw ConfigError("compose: unit count must be a power of two");
    if (repetitions < 3)
        throw ConfigError("compose: repetitions must be >= 3");
    if (period_samples == 0)
        throw ConfigError("compose: period_samples must be positive");
    for (const auto& u : units) {
        require_same_rate(units[0], u, "compose");
        if (u.size() > period_samples)
            throw ConfigError("compose: unit longer than the slot period");
        if (u.empty())
            throw ConfigError("compose: empty unit");
    }

    StructuredTestSignal out;
    out.units = units;
    out.hadamard_order = m;
    out.period_samples = period_samples;
    out.repetitions = repetitions;
    out.allocation = walsh_hadamard(m);

    std::vector<double> super(m * period_samples, 0.0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            const double sign = out.allocation[i][j];
            const auto& u = units[i].samples;
            double* slot = super.data() + j * period_samples;
            for (std::size_t t = 0; t < u.size(); ++t) slot[t] += sign * u[t];
        }

    const double peak = peak_abs(super);
    if (peak <= 0.0) throw DegenerateInputError("compose: all units are zero");
    out.normalization_gain = 1.0 / peak;

    out.waveform.sample_rate_hz = units[0].sample_rate_hz;
    out.waveform.samples.reserve(repetitions * super.size());
    // Divide rather than multiply by the reciprocal so the peak sample
    // lands on exactly +-1.0.
    for (std::size_t r = 0; r < repetitions; ++r)
        for (double v : super)
            out.waveform.samples.push_back(v / peak);
    return out;
}

namespace {

void validate_structured(const StructuredTestSignal& s) {
    const std::size_t m = s.hadamard_order;
    if (!is_pow2(m) || s.units.size() != m)
        throw ConfigError("structured: unit count does not match hadamard_order");
    if (s.allocation.size() != m)
        throw ConfigError("structured: allocation is not M x M");
    for (const auto& row : s.allocation) {
        if (row.size() != m) throw ConfigError("structured: allocation is not M x M");
        for (int v : row)
            if (v != 1 && v != -1) throw ConfigError("structured: allocation entries must be +-1");
    }
    if (s.period_samples == 0) throw ConfigError("structured: period_samples must be positive");
    if (!(s.normalization_gain > 0.0))
        throw ConfigError("structured: normalization_gain must be positive");
    for (const auto& u : s.units)
        if (u.empty() || u.size() > s.period_samples)
            throw ConfigError("structured: unit does not fit the period");
}

} // namespace

IrGrid recover_channels(const StructuredTestSignal& structured, const SampledSignal& recording,
                        const SafeguardConfig& cfg) {
    validate_structured(structured);
    require_same_rate(structured.waveform, recording, "recover_channels");

    const std::size_t m = structured.hadamard_order;
    const std::size_t p = structured.period_samples;
    const std::size_t super = m * p;
    if (recording.size() < 2 * super)
        throw InsufficientDataError("recover_channels: recording shorter than 2 super-periods");

    // Segments available in the recording, capped at the stimulus repetitions;
    // anything after the last emitted repetition is decay tail, not steady
    // state. The first repetition is the transient and is dropped.
    const std::size_t reps_present =
        std::min(recording.size() / super, structured.repetitions);
    const std::size_t usable = reps_present - 1;

    const double combine_scale =
        1.0 / (static_cast<double>(m) * structured.normalization_gain);

    IrGrid grid;
    grid.irs.resize(m);
    SampledSignal unit_period, combined;
    unit_period.sample_rate_hz = recording.sample_rate_hz;
    combined.sample_rate_hz = recording.sample_rate_hz;
    for (std::size_t i = 0; i < m; ++i) {
        unit_period.samples.assign(p, 0.0);
        std::copy(structured.units[i].samples.begin(), structured.units[i].samples.end(),
                  unit_period.samples.begin());
        grid.irs[i].reserve(usable);
        if (signal_energy(unit_period.samples) == 0.0) {
            // A silent unit measures nothing; its channel is zero by definition.
            for (std::size_t r = 1; r <= usable; ++r) grid.irs[i].push_back(unit_period);
            continue;
        }
        for (std::size_t r = 1; r <= usable; ++r) {
            combined.samples.assign(p, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                const double sign = structured.allocation[i][j];
                const double* seg = recording.samples.data() + r * super + j * p;
                for (std::size_t t = 0; t < p; ++t)
                    combined.samples[t] += sign * seg[t];
            }
            for (double& v : combined.samples) v *= combine_scale;
            grid.irs[i].push_back(measure_ir_circular(unit_period, combined, cfg));
        }
    }
    return grid;
}

AlignmentResult align_to_stimulus(const SampledSignal& recording,
                                  const StructuredTestSignal& structured) {
    validate_structured(structured);
    require_same_rate(structured.waveform, recording, "align_to_stimulus");

    const std::size_t p = structured.period_samples;
    const std::size_t super = structured.hadamard_order * p;
    if (recording.size() < super)
        throw InsufficientDataError("align_to_stimulus: recording shorter than one super-period");

    // Correlate the first super-period against the recording.
    std::vector<double> templ(structured.waveform.samples.begin(),
                              structured.waveform.samples.begin() + static_cast<std::ptrdiff_t>(super));
    std::reverse(templ.begin(), templ.end());
    const auto full = fft_convolve(recording.samples, templ);
    const std::size_t n_lags = recording.size() - super + 1;
    std::vector<double> corr(full.begin() + static_cast<std::ptrdiff_t>(super - 1),
                             full.begin() + static_cast<std::ptrdiff_t>(super - 1 + n_lags));

    std::size_t best = 0;
    for (std::size_t d = 1; d < corr.size(); ++d)
        if (corr[d] > corr[best]) best = d;
    const double peak = corr[best];
    if (!(peak > 0.0))
        throw AlignmentError("align_to_stimulus: no positive correlation with the stimulus", 0.0);

    // The stimulus is periodic, so the correlation has a comb of near-equal
    // peaks one super-period apart; the onset is the earliest strong one.
    std::size_t onset = best;
    while (onset >= super && corr[onset - super] >= 0.7 * peak) onset -= super;

    // Confidence compares the peak against everything away from the comb.
    const std::size_t guard = std::max<std::size_t>(p / 4, 1);
    double outside = 0.0;
    bool any_outside = false;
    for (std::size_t d = 0; d < corr.size(); ++d) {
        const std::size_t nearest_comb =
            onset + ((d > onset ? (d - onset + super / 2) / super : 0)) * super;
        const std::size_t dist = d > nearest_comb ? d - nearest_comb : nearest_comb - d;
        if (dist <= guard) continue;
        any_outside = true;
        outside = std::max(outside, corr[d]);
    }

    AlignmentResult result;
    result.offset = onset;
    result.confidence = !any_outside || outside <= 0.0
                            ? std::numeric_limits<double>::infinity()
                            : peak / outside;
    if (result.confidence < 4.0)
        throw AlignmentError("align_to_stimulus: confidence below threshold", result.confidence);
    return result;
}

} // namespace tspkit
