#include "tspkit/decompose.hpp"

#include <algorithm>

#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"

namespace tspkit {

namespace {

struct GridSpectra {
    std::size_t m = 0, reps = 0, len = 0, bins = 0;
    int rate = 0;
    // spectra[i][r][k]
    std::vector<std::vector<std::vector<std::complex<double>>>> spectra;
    // unit_mean[i][k]
    std::vector<std::vector<std::complex<double>>> unit_mean;
    std::vector<std::complex<double>> grand_mean;
};

GridSpectra analyze_grid(const IrGrid& grid) {
    validate_grid(grid);
    GridSpectra g;
    g.m = grid.units();
    g.reps = grid.repetitions();
    g.len = grid.irs[0][0].size();
    g.bins = g.len / 2 + 1;
    g.rate = grid.irs[0][0].sample_rate_hz;

    g.spectra.resize(g.m);
    g.unit_mean.assign(g.m, std::vector<std::complex<double>>(g.bins, 0.0));
    g.grand_mean.assign(g.bins, 0.0);
    for (std::size_t i = 0; i < g.m; ++i) {
        g.spectra[i].reserve(g.reps);
        for (std::size_t r = 0; r < g.reps; ++r) {
            g.spectra[i].push_back(rfft(grid.irs[i][r].samples, g.len));
            for (std::size_t k = 0; k < g.bins; ++k) g.unit_mean[i][k] += g.spectra[i][r][k];
        }
        for (std::size_t k = 0; k < g.bins; ++k) {
            g.unit_mean[i][k] /= static_cast<double>(g.reps);
            g.grand_mean[k] += g.unit_mean[i][k];
        }
    }
    for (auto& v : g.grand_mean) v /= static_cast<double>(g.m);
    return g;
}

double summary_level(const std::vector<double>& power,
                     const std::vector<std::complex<double>>& lti) {
    double num = 0.0, den = 0.0;
    for (double p : power) num += p;
    for (const auto& v : lti) den += std::norm(v);
    if (den <= 0.0)
        throw DegenerateInputError("decompose: LTI spectrum has no energy");
    return num > 0.0 ? 10.0 * std::log10(num / den) : kDbFloor;
}

std::vector<double> rtv_spectrum(const GridSpectra& g) {
    if (g.reps < 2)
        throw InsufficientDataError("rtv: need at least 2 usable repetitions");
    std::vector<double> rtv(g.bins, 0.0);
    for (std::size_t i = 0; i < g.m; ++i)
        for (std::size_t r = 0; r < g.reps; ++r)
            for (std::size_t k = 0; k < g.bins; ++k)
                rtv[k] += std::norm(g.spectra[i][r][k] - g.unit_mean[i][k]);
    const double scale = 1.0 / (static_cast<double>(g.m) * static_cast<double>(g.reps - 1));
    for (double& v : rtv) v *= scale;
    return rtv;
}

std::vector<double> sdti_spectrum(const GridSpectra& g, const std::vector<double>& rtv) {
    if (g.m < 2)
        throw InsufficientDataError("sdti: need at least 2 units");
    std::vector<double> sdti(g.bins, 0.0);
    for (std::size_t i = 0; i < g.m; ++i)
        for (std::size_t k = 0; k < g.bins; ++k)
            sdti[k] += std::norm(g.unit_mean[i][k] - g.grand_mean[k]);
    const double scale = 1.0 / static_cast<double>(g.m - 1);
    const double rtv_leak = 1.0 / static_cast<double>(g.reps);
    for (std::size_t k = 0; k < g.bins; ++k)
        sdti[k] = std::max(0.0, sdti[k] * scale - rtv[k] * rtv_leak);
    return sdti;
}

} // namespace

SampledSignal estimate_lti(const IrGrid& grid) {
    validate_grid(grid);
    SampledSignal out;
    out.sample_rate_hz = grid.irs[0][0].sample_rate_hz;
    out.samples.assign(grid.irs[0][0].size(), 0.0);
    for (const auto& row : grid.irs)
        for (const auto& ir : row)
            for (std::size_t t = 0; t < out.samples.size(); ++t)
                out.samples[t] += ir.samples[t];
    const double scale = 1.0 / static_cast<double>(grid.units() * grid.repetitions());
    for (double& v : out.samples) v *= scale;
    return out;
}

PowerEstimate estimate_rtv(const IrGrid& grid) {
    const auto g = analyze_grid(grid);
    PowerEstimate est;
    est.power_spectrum = rtv_spectrum(g);
    est.summary_level_db = summary_level(est.power_spectrum, g.grand_mean);
    return est;
}

PowerEstimate estimate_sdti(const IrGrid& grid) {
    const auto g = analyze_grid(grid);
    if (g.reps < 2)
        throw InsufficientDataError("sdti: need at least 2 repetitions for the rtv bias term");
    PowerEstimate est;
    est.power_spectrum = sdti_spectrum(g, rtv_spectrum(g));
    est.summary_level_db = summary_level(est.power_spectrum, g.grand_mean);
    return est;
}

Decomposition decompose(const IrGrid& grid) {
    const auto g = analyze_grid(grid);
    Decomposition d;
    d.lti_ir = estimate_lti(grid);
    d.lti_spectrum = g.grand_mean;
    d.rtv_power_spectrum = rtv_spectrum(g);
    d.sdti_power_spectrum = sdti_spectrum(g, d.rtv_power_spectrum);
    d.levels_db.lti_db = 0.0;
    d.levels_db.rtv_db = summary_level(d.rtv_power_spectrum, g.grand_mean);
    d.levels_db.sdti_db = summary_level(d.sdti_power_spectrum, g.grand_mean);
    return d;
}

} // namespace tspkit
