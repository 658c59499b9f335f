#include <doctest.h>

#include <complex>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "tspkit/fft.hpp"
#include "tspkit/rng.hpp"

using namespace tspkit;

TEST_CASE("rfft matches a brute-force DFT") {
    Rng rng(3);
    std::vector<double> x(64);
    for (auto& v : x) v = rng.gaussian();
    auto fast = rfft(x, x.size());
    auto slow = testutil::brute_rdft(x);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t k = 0; k < fast.size(); ++k) {
        CHECK(fast[k].real() == doctest::Approx(slow[k].real()).epsilon(1e-10).scale(1.0));
        CHECK(fast[k].imag() == doctest::Approx(slow[k].imag()).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("irfft inverts rfft") {
    Rng rng(4);
    for (std::size_t n : {16u, 100u, 1024u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.gaussian();
        auto back = irfft(rfft(x, n), n);
        REQUIRE(back.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("rfft zero-pads and truncates") {
    std::vector<double> x{1.0, 2.0, 3.0};
    auto padded = rfft(x, 8);
    CHECK(padded.size() == 5);
    // DC bin is the plain sum
    CHECK(padded[0].real() == doctest::Approx(6.0));
    auto truncated = rfft(x, 2);
    CHECK(truncated.size() == 2);
    CHECK(truncated[0].real() == doctest::Approx(3.0));
}

TEST_CASE("parseval") {
    Rng rng(5);
    std::vector<double> x(256);
    for (auto& v : x) v = rng.gaussian();
    auto spec = rfft(x, x.size());
    double time_e = 0.0;
    for (double v : x) time_e += v * v;
    double freq_e = std::norm(spec[0]) + std::norm(spec.back());
    for (std::size_t k = 1; k + 1 < spec.size(); ++k) freq_e += 2.0 * std::norm(spec[k]);
    CHECK(freq_e / static_cast<double>(x.size()) == doctest::Approx(time_e).epsilon(1e-12));
}

TEST_CASE("rfft and irfft reject n = 0") {
    std::vector<double> x{1.0};
    CHECK_THROWS_AS(rfft(x, 0), std::invalid_argument);
    std::vector<std::complex<double>> s{{1.0, 0.0}};
    CHECK_THROWS_AS(irfft(s, 0), std::invalid_argument);
}

TEST_CASE("next_pow2 / is_pow2") {
    CHECK(next_pow2(1) == 1);
    CHECK(next_pow2(2) == 2);
    CHECK(next_pow2(3) == 4);
    CHECK(next_pow2(1024) == 1024);
    CHECK(next_pow2(1025) == 2048);
    CHECK(is_pow2(1));
    CHECK(is_pow2(65536));
    CHECK_FALSE(is_pow2(0));
    CHECK_FALSE(is_pow2(24));
}

TEST_CASE("fft_convolve matches brute-force convolution") {
    Rng rng(6);
    std::vector<double> a(123), b(45);
    for (auto& v : a) v = rng.gaussian();
    for (auto& v : b) v = rng.gaussian();
    auto fast = fft_convolve(a, b);
    auto slow = testutil::brute_conv(a, b);
    REQUIRE(fast.size() == slow.size());
    CHECK(testutil::rel_error_db(fast, slow) < -200.0);
}

TEST_CASE("circular_autocorrelation matches brute force") {
    Rng rng(7);
    std::vector<double> x(97);
    for (auto& v : x) v = rng.gaussian();
    auto fast = circular_autocorrelation(x);
    auto slow = testutil::brute_circ_autocorr(x);
    REQUIRE(fast.size() == slow.size());
    CHECK(testutil::rel_error_db(fast, slow) < -200.0);
}
