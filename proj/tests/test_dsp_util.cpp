#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tspkit/dsp_util.hpp"
#include "tspkit/rng.hpp"

using namespace tspkit;

namespace {

// Per-bin restatement of the documented smoothing window, O(n^2).
std::vector<double> brute_octave_smooth(const std::vector<double>& v, double bw) {
    std::vector<double> out(v.size());
    if (v.empty()) return out;
    out[0] = v[0];
    const double half_span = std::exp2(bw / 2.0);
    for (std::size_t k = 1; k < v.size(); ++k) {
        auto lo = static_cast<std::size_t>(std::floor(static_cast<double>(k) / half_span));
        auto hi = static_cast<std::size_t>(std::ceil(static_cast<double>(k) * half_span));
        lo = std::min(lo, k - 1);
        hi = std::max(hi, k + 1);
        hi = std::min(hi, v.size() - 1);
        double acc = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) acc += v[i];
        out[k] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

} // namespace

TEST_CASE("octave_smooth: constant input unchanged") {
    std::vector<double> v(257, 3.5);
    auto out = octave_smooth(v, 1.0 / 3.0);
    for (double x : out) CHECK(x == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("octave_smooth matches the per-bin definition") {
    Rng rng(11);
    std::vector<double> v(513);
    for (auto& x : v) x = std::abs(rng.gaussian()) + 0.01;
    for (double bw : {1.0 / 12.0, 1.0 / 3.0, 1.0}) {
        auto fast = octave_smooth(v, bw);
        auto slow = brute_octave_smooth(v, bw);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t k = 0; k < fast.size(); ++k)
            CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-12));
    }
}

TEST_CASE("octave_smooth: zero bandwidth is a copy") {
    std::vector<double> v{1.0, 5.0, 2.0, 8.0};
    auto out = octave_smooth(v, 0.0);
    CHECK(out == v);
}

TEST_CASE("apply_edge_tapers") {
    std::vector<double> v(100, 1.0);
    apply_edge_tapers(v, 10);
    CHECK(v[0] == 0.0);
    CHECK(v[99] == 0.0);
    // middle untouched
    for (std::size_t i = 10; i < 90; ++i) CHECK(v[i] == 1.0);
    // symmetric raised cosine
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(v[i] == doctest::Approx(v[99 - i]));
        double w = 0.5 - 0.5 * std::cos(3.14159265358979323846 * i / 10.0);
        CHECK(v[i] == doctest::Approx(w));
    }

    std::vector<double> tiny{1.0, 1.0, 1.0};
    apply_edge_tapers(tiny, 10);  // clipped to half the length
    CHECK(tiny[0] == 0.0);
    CHECK(tiny[2] == 0.0);
    CHECK(tiny[1] == 1.0);
}

TEST_CASE("cumulative_trapezoid") {
    std::vector<double> v{1.0, 3.0, 5.0, 7.0};
    auto out = cumulative_trapezoid(v);
    REQUIRE(out.size() == 4);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == doctest::Approx(2.0));
    CHECK(out[2] == doctest::Approx(6.0));
    CHECK(out[3] == doctest::Approx(12.0));

    // integral of a constant is a ramp
    std::vector<double> c(50, 2.0);
    auto ramp = cumulative_trapezoid(c);
    for (std::size_t i = 0; i < ramp.size(); ++i)
        CHECK(ramp[i] == doctest::Approx(2.0 * static_cast<double>(i)));
}

TEST_CASE("fit_line recovers an exact line") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.3 * i);
        y.push_back(-4.0 * (0.3 * i) + 2.5);
    }
    auto fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(2.5).epsilon(1e-12));

    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{2.0}),
                    std::invalid_argument);
    std::vector<double> same{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(fit_line(same, same), std::invalid_argument);
}

TEST_CASE("median") {
    std::vector<double> odd{5.0, 1.0, 3.0};
    CHECK(median(odd) == 3.0);
    std::vector<double> even{4.0, 1.0, 3.0, 2.0};
    CHECK(median(even) == doctest::Approx(2.5));
    CHECK_THROWS_AS(median(std::vector<double>{}), std::invalid_argument);
}
