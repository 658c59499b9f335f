#include "tspkit/dsp_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tspkit {

std::vector<double> octave_smooth(std::span<const double> values, double bandwidth_octaves) {
    const std::size_t n = values.size();
    std::vector<double> out(n);
    if (n == 0) return out;
    if (bandwidth_octaves <= 0.0) {
        std::copy(values.begin(), values.end(), out.begin());
        return out;
    }

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + values[k];

    const double half_span = std::exp2(bandwidth_octaves / 2.0);
    out[0] = values[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double kd = static_cast<double>(k);
        auto lo = static_cast<std::size_t>(std::floor(kd / half_span));
        auto hi = static_cast<std::size_t>(std::ceil(kd * half_span));
        lo = std::min(lo, k - 1);
        hi = std::max(hi, k + 1);
        hi = std::min(hi, n - 1);
        out[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

void apply_edge_tapers(std::span<double> x, std::size_t taper_len) {
    if (taper_len == 0 || x.empty()) return;
    taper_len = std::min(taper_len, x.size() / 2);
    const double denom = static_cast<double>(taper_len);
    for (std::size_t i = 0; i < taper_len; ++i) {
        const double w =
            0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / denom);
        x[i] *= w;
        x[x.size() - 1 - i] *= w;
    }
}

std::vector<double> cumulative_trapezoid(std::span<const double> x) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i - 1] + x[i]);
    return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

double median(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1,
                     v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (v[mid - 1] + hi);
}

} // namespace tspkit
