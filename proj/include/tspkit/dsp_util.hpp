#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tspkit {

// Fractional-octave smoothing of a nonnegative spectrum envelope (e.g. power
// per rfft bin).  Each bin k is replaced by the mean of bins in
// [k / 2^(bw/2), k * 2^(bw/2)] clipped to the valid range, always covering at
// least k-1..k+1.  Bin 0 keeps its own value.  O(n) via prefix sums.
std::vector<double> octave_smooth(std::span<const double> values, double bandwidth_octaves);

// In-place raised-cosine fades over the first / last `taper_len` samples.
void apply_edge_tapers(std::span<double> x, std::size_t taper_len);

// Cumulative trapezoid integral; out[0] = 0, out.size() == x.size().
std::vector<double> cumulative_trapezoid(std::span<const double> x);

// Least-squares line fit y ~ slope * x + intercept.  Requires >= 2 points.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Median of a copy of the data.  Requires nonempty input.
double median(std::span<const double> values);

} // namespace tspkit
