#pragma once

#include <cstddef>
#include <vector>

#include "tspkit/errors.hpp"
#include "tspkit/signal.hpp"

namespace tspkit {

// Per-unit, per-repetition impulse responses: irs[unit][repetition], all the
// same length and sample rate. Produced by recover_channels, consumed by the
// decomposition estimators.
struct IrGrid {
    std::vector<std::vector<SampledSignal>> irs;

    std::size_t units() const { return irs.size(); }
    std::size_t repetitions() const { return irs.empty() ? 0 : irs[0].size(); }
};

inline void validate_grid(const IrGrid& grid) {
    if (grid.irs.empty() || grid.irs[0].empty())
        throw InsufficientDataError("ir grid: empty");
    const std::size_t reps = grid.irs[0].size();
    const std::size_t len = grid.irs[0][0].size();
    const int rate = grid.irs[0][0].sample_rate_hz;
    if (len == 0) throw DegenerateInputError("ir grid: zero-length responses");
    for (const auto& row : grid.irs) {
        if (row.size() != reps)
            throw ConfigError("ir grid: ragged repetition counts");
        for (const auto& ir : row)
            if (ir.size() != len || ir.sample_rate_hz != rate)
                throw ConfigError("ir grid: responses differ in length or rate");
    }
}

} // namespace tspkit
