#pragma once

#include <complex>
#include <vector>

#include "tspkit/ir_grid.hpp"
#include "tspkit/signal.hpp"

namespace tspkit {

// Split of the measured responses into LTI (grand-average response), RTV
// (variance across repetitions: noise and drift) and SDTI (variance across
// units beyond RTV: signal-dependent deviation, i.e. nonlinearity).
struct PowerEstimate {
    std::vector<double> power_spectrum;  // one-sided, per bin
    double summary_level_db = kDbFloor;  // 10*log10(sum power / sum |LTI|^2)
};

struct Decomposition {
    SampledSignal lti_ir;
    std::vector<std::complex<double>> lti_spectrum;  // one-sided
    std::vector<double> rtv_power_spectrum;
    std::vector<double> sdti_power_spectrum;
    struct Levels {
        double lti_db = 0.0;  // reference, by definition
        double rtv_db = kDbFloor;
        double sdti_db = kDbFloor;
    } levels_db;
};

// Sample-wise mean over all units and repetitions.
SampledSignal estimate_lti(const IrGrid& grid);

// Unbiased per-bin variance across repetitions, averaged over units.
PowerEstimate estimate_rtv(const IrGrid& grid);

// Unbiased per-bin variance of the per-unit mean spectra across units, with
// the expected RTV leakage (rtv / repetitions) subtracted and clamped at 0.
PowerEstimate estimate_sdti(const IrGrid& grid);

Decomposition decompose(const IrGrid& grid);

} // namespace tspkit
