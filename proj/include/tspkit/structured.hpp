#pragma once

#include <cstddef>
#include <vector>

#include "tspkit/deconv.hpp"
#include "tspkit/ir_grid.hpp"
#include "tspkit/signal.hpp"

namespace tspkit {

// Sylvester-construction Walsh-Hadamard matrix, entries +1/-1.
std::vector<std::vector<int>> walsh_hadamard(std::size_t order);

// M unit TSPs laid out in M slots of period_samples each: slot j of every
// super-period carries sum_i allocation[i][j] * unit_i, the whole super-period
// repeated `repetitions` times. Cross-talk cancellation in recovery is exact
// when unit length plus impulse-response length stays within one period.
struct StructuredTestSignal {
    std::vector<SampledSignal> units;
    std::size_t hadamard_order = 0;  // M
    std::size_t period_samples = 0;
    std::size_t repetitions = 0;  // R
    SampledSignal waveform;
    std::vector<std::vector<int>> allocation;  // the M x M sign matrix used
    double normalization_gain = 1.0;           // multiplier applied to hit peak 1.0
};

StructuredTestSignal compose_structured(const std::vector<SampledSignal>& units,
                                        std::size_t period_samples, std::size_t repetitions);

// Recovery from a recording aligned to the stimulus onset: the first
// repetition is discarded as transient; for each later repetition and each
// unit, the Hadamard-sign combination of that repetition's M slots is
// deconvolved against the unit's period. Returns an M x (usable repetitions)
// grid of period-length IRs.
IrGrid recover_channels(const StructuredTestSignal& structured, const SampledSignal& recording,
                        const SafeguardConfig& cfg);

// Cross-correlation alignment helper. offset is where the stimulus onset sits
// in the recording; confidence is the ratio of the onset peak to the largest
// correlation away from the periodic comb (threshold 4).
struct AlignmentResult {
    std::size_t offset = 0;
    double confidence = 0.0;
};

AlignmentResult align_to_stimulus(const SampledSignal& recording,
                                  const StructuredTestSignal& structured);

} // namespace tspkit
