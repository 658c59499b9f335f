#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "tspkit/acoustics.hpp"
#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"
#include "tspkit/simchannel.hpp"

using namespace tspkit;

TEST_CASE("make_bands: octave bank at 44.1 kHz") {
    auto bands = make_bands(BandSpec{}, 44100);
    std::vector<std::string> labels;
    for (const auto& b : bands) labels.push_back(b.label);
    // 16 kHz center would need a 22.6 kHz upper edge, past Nyquist
    CHECK(labels == std::vector<std::string>{"63", "125", "250", "500", "1000", "2000", "4000",
                                             "8000"});
    CHECK(bands.front().extend_down);
    CHECK(bands.back().extend_up);
    for (std::size_t i = 0; i + 1 < bands.size(); ++i) {
        CHECK_FALSE(bands[i].extend_up);
        CHECK(bands[i].hi_hz == doctest::Approx(bands[i + 1].lo_hz));
        CHECK(bands[i].hi_hz == doctest::Approx(bands[i].center_hz * std::sqrt(2.0)));
    }
}

TEST_CASE("make_bands: third octave bank is denser") {
    BandSpec spec;
    spec.kind = BandKind::third_octave;
    auto third = make_bands(spec, 44100);
    auto octave = make_bands(BandSpec{}, 44100);
    CHECK(third.size() > 2 * octave.size());
    for (const auto& b : third) {
        CHECK(b.center_hz >= spec.f_min_hz);
        CHECK(b.center_hz <= spec.f_max_hz);
        CHECK(b.hi_hz <= 22050.0 + 1e-9);
        CHECK(b.hi_hz / b.lo_hz == doctest::Approx(std::exp2(1.0 / 3.0)));
    }
}

TEST_CASE("make_bands: validation") {
    BandSpec spec;
    spec.f_min_hz = 16000.0;
    spec.f_max_hz = 50.0;
    CHECK_THROWS_AS(make_bands(spec, 44100), ConfigError);
    spec = BandSpec{};
    spec.f_max_hz = 30000.0;  // beyond Nyquist
    CHECK_THROWS_AS(make_bands(spec, 44100), ConfigError);
    spec = BandSpec{};
    spec.f_min_hz = 1100.0;
    spec.f_max_hz = 1150.0;  // no octave center in range
    CHECK_THROWS_AS(make_bands(spec, 44100), ConfigError);
    CHECK_THROWS_AS(make_bands(BandSpec{}, 0), ConfigError);
}

TEST_CASE("bandpass bank conserves energy") {
    auto x = testutil::make_noise(4096, 21, 44100);
    const double total = signal_energy(x.samples);
    for (auto kind : {BandKind::octave, BandKind::third_octave}) {
        BandSpec spec;
        spec.kind = kind;
        auto bands = make_bands(spec, 44100);
        double sum = 0.0;
        for (const auto& b : bands) sum += signal_energy(bandpass(x, b).samples);
        CHECK(sum == doctest::Approx(total).epsilon(0.01));
        // the crossfades are power-complementary, so it is in fact much tighter
        CHECK(sum == doctest::Approx(total).epsilon(1e-9));
    }
}

TEST_CASE("bandpass: out-of-band content is rejected") {
    // ~248 Hz tone on an exact DFT bin (46 cycles in 8192 samples) so the
    // line has no leakage skirts, measured through the 4 kHz band
    SampledSignal tone;
    tone.sample_rate_hz = 44100;
    tone.samples.resize(8192);
    for (std::size_t i = 0; i < tone.samples.size(); ++i)
        tone.samples[i] = std::sin(2.0 * 3.14159265358979323846 * 46.0 * i / 8192.0);
    auto bands = make_bands(BandSpec{}, 44100);
    const Band* b4k = nullptr;
    for (const auto& b : bands)
        if (b.label == "4000") b4k = &b;
    REQUIRE(b4k != nullptr);
    auto filtered = bandpass(tone, *b4k);
    CHECK(signal_energy(filtered.samples) / signal_energy(tone.samples) < 1e-12);
}

TEST_CASE("freq_response basics") {
    auto delta = testutil::make_delta(256, 0, 1.0, 44100);
    auto flat = freq_response(delta);
    REQUIRE(flat.size() == 129);
    for (double v : flat) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    auto half = testutil::make_delta(256, 0, 0.5, 44100);
    for (double v : freq_response(half)) CHECK(v == doctest::Approx(-6.0206).epsilon(1e-4));

    SampledSignal comb{std::vector<double>{1.0, 1.0}, 44100};
    auto resp = freq_response(comb);
    REQUIRE(resp.size() == 2);
    CHECK(resp[0] == doctest::Approx(6.0206).epsilon(1e-4));  // DC: |1+1|
    CHECK(resp[1] == kDbFloor);                               // Nyquist: exact null
}

TEST_CASE("schroeder decay of a lone impulse") {
    auto ir = testutil::make_delta(64, 0, 0.8, 44100);
    auto curve = schroeder_decay(ir);
    REQUIRE(curve.level_db.size() == 64);
    CHECK(curve.sample_period_s == doctest::Approx(1.0 / 44100.0));
    CHECK(curve.level_db[0] == 0.0);
    for (std::size_t i = 1; i < curve.level_db.size(); ++i) CHECK(curve.level_db[i] == kDbFloor);
}

TEST_CASE("schroeder decay plateau of a two-impulse response") {
    SampledSignal ir;
    ir.sample_rate_hz = 44100;
    ir.samples.assign(64, 0.0);
    ir.samples[0] = 0.5;
    ir.samples[20] = 0.5;
    auto curve = schroeder_decay(ir);
    CHECK(curve.level_db[0] == 0.0);
    for (std::size_t i = 1; i <= 20; ++i)
        CHECK(curve.level_db[i] == doctest::Approx(-3.0103).epsilon(1e-4));
    for (std::size_t i = 21; i < 64; ++i) CHECK(curve.level_db[i] == kDbFloor);
}

TEST_CASE("schroeder decay is monotone and scale-invariant") {
    auto ir = testutil::make_noise(2048, 31, 44100);
    for (std::size_t i = 0; i < ir.samples.size(); ++i)
        ir.samples[i] *= std::exp(-3.0 * static_cast<double>(i) / 2048.0);
    auto curve = schroeder_decay(ir);
    for (std::size_t i = 1; i < curve.level_db.size(); ++i)
        CHECK(curve.level_db[i] <= curve.level_db[i - 1]);

    SampledSignal scaled = ir;
    for (auto& v : scaled.samples) v *= 7.0;
    auto curve7 = schroeder_decay(scaled);
    for (std::size_t i = 0; i < curve.level_db.size(); ++i) {
        if (curve.level_db[i] == kDbFloor)
            CHECK(curve7.level_db[i] == kDbFloor);
        else
            CHECK(curve7.level_db[i] == doctest::Approx(curve.level_db[i]).epsilon(1e-9));
    }
}

TEST_CASE("estimate_rt on an exact exponential decay") {
    // analytic curve: level(t) = -60 t / 0.3
    DecayCurve curve;
    curve.sample_period_s = 1.0 / 1000.0;
    curve.level_db.resize(700);
    for (std::size_t i = 0; i < curve.level_db.size(); ++i)
        curve.level_db[i] = -60.0 * (static_cast<double>(i) / 1000.0) / 0.3;
    CHECK(estimate_rt(curve, RtMethod::T20) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(estimate_rt(curve, RtMethod::T30) == doctest::Approx(0.3).epsilon(1e-9));

    SUBCASE("exponential impulse response, through the full path") {
        SampledSignal ir;
        ir.sample_rate_hz = 16000;
        ir.samples.resize(16000);
        // energy envelope exp(-t/tau) hits -60 dB at 0.3 s
        const double tau = 0.3 / (6.0 * std::log(10.0));
        for (std::size_t i = 0; i < ir.samples.size(); ++i)
            ir.samples[i] = std::exp(-(static_cast<double>(i) / 16000.0) / (2.0 * tau));
        auto c = schroeder_decay(ir);
        CHECK(estimate_rt(c, RtMethod::T30) == doctest::Approx(0.3).epsilon(0.01));
    }
}

TEST_CASE("estimate_rt: noise floor cuts the range") {
    DecayCurve curve;
    curve.sample_period_s = 1.0 / 1000.0;
    curve.level_db.resize(700);
    for (std::size_t i = 0; i < curve.level_db.size(); ++i)
        curve.level_db[i] = std::max(-60.0 * (static_cast<double>(i) / 1000.0) / 0.3, -20.0);
    // T30 needs the curve to reach -35 dB; it floors at -20 dB here
    try {
        estimate_rt(curve, RtMethod::T30);
        FAIL("expected InsufficientRangeError");
    } catch (const InsufficientRangeError& e) {
        CHECK(e.achieved_range_db == doctest::Approx(20.0).epsilon(0.01));
    }
}

TEST_CASE("estimate_rt: noisy synthetic tails, median of 20 seeds within 5%") {
    const double t60 = 0.5;
    std::vector<double> estimates;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto ir = testutil::make_noise(16000, seed, 16000);
        const double decay = 3.0 * std::log(10.0) / t60;
        for (std::size_t i = 0; i < ir.samples.size(); ++i)
            ir.samples[i] *= std::exp(-decay * static_cast<double>(i) / 16000.0);
        estimates.push_back(estimate_rt(schroeder_decay(ir), RtMethod::T30));
    }
    std::nth_element(estimates.begin(), estimates.begin() + 10, estimates.end());
    CHECK(estimates[10] == doctest::Approx(t60).epsilon(0.05));
}

TEST_CASE("estimate_rt: degenerate curves") {
    DecayCurve curve;
    curve.sample_period_s = 1e-3;
    curve.level_db = {0.0, -1.0};
    CHECK_THROWS_AS(estimate_rt(curve, RtMethod::T20), InsufficientRangeError);
}

TEST_CASE("band-limited decay curves") {
    RoomIrSpec room;
    room.direct_delay_s = 0.005;
    room.tail_onset_s = 0.002;
    room.t60_s = 0.25;
    room.tail_gain = 0.3;
    room.length_s = 0.4;
    room.seed = 3;
    auto ir = synth_room_ir(room, 16000);
    auto bands = make_bands(BandSpec{BandKind::octave, 125.0, 4000.0}, 16000);
    for (const auto& b : bands) {
        auto curve = schroeder_decay(ir, b);
        for (std::size_t i = 1; i < curve.level_db.size(); ++i)
            CHECK(curve.level_db[i] <= curve.level_db[i - 1]);
        const double rt = estimate_rt(curve, RtMethod::T20);
        CHECK(rt == doctest::Approx(0.25).epsilon(0.2));
    }
}

TEST_CASE("split_direct_indirect") {
    SUBCASE("lone impulse is all direct") {
        auto ir = testutil::make_delta(4096, 100, 1.0, 44100);
        auto split = split_direct_indirect(ir);
        CHECK(split.peak_index == 100);
        CHECK(split.indirect_energy == 0.0);
        CHECK(split.drr_db == 99.0);
    }

    SUBCASE("two spikes give the exact energy ratio") {
        SampledSignal ir;
        ir.sample_rate_hz = 44100;
        ir.samples.assign(4096, 0.0);
        const double a = 0.9, b = 0.2;
        ir.samples[50] = a;
        ir.samples[50 + 882] = b;  // 20 ms later, outside the 2.5 ms window
        auto split = split_direct_indirect(ir);
        CHECK(split.peak_index == 50);
        CHECK(split.drr_db == doctest::Approx(20.0 * std::log10(a / b)).epsilon(1e-9));
        CHECK(split.direct_energy + split.indirect_energy ==
              doctest::Approx(signal_energy(ir.samples)).epsilon(1e-15));
    }

    SUBCASE("energy conservation on a dense response") {
        auto ir = testutil::make_noise(8192, 41, 44100, 0.05);
        ir.samples[500] = 3.0;
        auto split = split_direct_indirect(ir);
        CHECK(split.peak_index == 500);
        CHECK(split.direct_energy + split.indirect_energy ==
              doctest::Approx(signal_energy(ir.samples)).epsilon(1e-12));
        CHECK(split.direct_energy > 0.0);
        CHECK(split.indirect_energy > 0.0);

        SampledSignal scaled = ir;
        for (auto& v : scaled.samples) v *= 7.0;
        auto split7 = split_direct_indirect(scaled);
        CHECK(split7.drr_db == doctest::Approx(split.drr_db).epsilon(1e-12));
        CHECK(split7.peak_index == split.peak_index);
    }

    SUBCASE("featureless input has no detectable peak") {
        SampledSignal flat{std::vector<double>(4096, 0.3), 44100};
        CHECK_THROWS_AS(split_direct_indirect(flat), DetectionError);
    }

    SUBCASE("validation") {
        auto ir = testutil::make_delta(100, 10, 1.0, 44100);
        CHECK_THROWS_AS(split_direct_indirect(ir, 0.0), ConfigError);
        CHECK_THROWS_AS(split_direct_indirect(ir, 1000.0), ConfigError);
    }
}

TEST_CASE("band_snr on a constructed decomposition") {
    const std::size_t n = 1024;
    Decomposition d;
    d.lti_ir = testutil::make_delta(n, 0, 1.0, 44100);
    d.lti_spectrum = rfft(d.lti_ir.samples, n);  // all-ones
    d.rtv_power_spectrum.assign(n / 2 + 1, 1e-3);
    d.sdti_power_spectrum.assign(n / 2 + 1, 0.0);

    auto snr = band_snr(d, BandSpec{});
    REQUIRE(!snr.empty());
    for (const auto& bv : snr) CHECK(bv.value_db == doctest::Approx(30.0).epsilon(1e-9));

    SUBCASE("zero RTV caps at +99") {
        d.rtv_power_spectrum.assign(n / 2 + 1, 0.0);
        for (const auto& bv : band_snr(d, BandSpec{})) CHECK(bv.value_db == 99.0);
    }

    SUBCASE("per-band values follow the injected shape") {
        // 20 dB below, 40 dB above a 2 kHz octave-band edge
        const double edge_hz = 2000.0 * std::sqrt(2.0);
        const double hz_per_bin = 44100.0 / static_cast<double>(n);
        const auto boundary = static_cast<std::size_t>(std::ceil(edge_hz / hz_per_bin));
        for (std::size_t k = 0; k < d.rtv_power_spectrum.size(); ++k)
            d.rtv_power_spectrum[k] = k < boundary ? 1e-2 : 1e-4;
        for (const auto& bv : band_snr(d, BandSpec{})) {
            const double center = std::stod(bv.label);
            if (center <= 2000.0) CHECK(bv.value_db == doctest::Approx(20.0).epsilon(1e-9));
            if (center >= 4000.0) CHECK(bv.value_db == doctest::Approx(40.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("reverberation radius and placement") {
    CHECK(reverberation_radius(0.0, 1.0) == doctest::Approx(1.0));
    CHECK(reverberation_radius(6.0206, 0.3) == doctest::Approx(0.6).epsilon(1e-4));

    SUBCASE("estimate is independent of where the microphone sat") {
        // direct energy follows the inverse square law, diffuse field constant
        const double e_diffuse = 0.04;
        double first = 0.0;
        for (double d : {0.3, 0.6, 1.2}) {
            const double e_direct = 1.0 / (d * d);
            const double drr = 10.0 * std::log10(e_direct / e_diffuse);
            const double radius = reverberation_radius(drr, d);
            if (first == 0.0)
                first = radius;
            else
                CHECK(radius == doctest::Approx(first).epsilon(0.05));
        }
        CHECK(first == doctest::Approx(1.0 / std::sqrt(0.04)).epsilon(1e-9));
    }

    SUBCASE("verdict is a strict half-radius rule") {
        CHECK(placement_verdict(0.3, 0.8));
        CHECK_FALSE(placement_verdict(0.3, 0.6));   // exactly half: not ok
        CHECK_FALSE(placement_verdict(0.6, 0.8));
        CHECK(placement_verdict(0.4 - 1e-12, 0.8));
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(reverberation_radius(0.0, 0.0), ConfigError);
        CHECK_THROWS_AS(reverberation_radius(0.0, -1.0), ConfigError);
    }
}

TEST_CASE("analyze assembles the full report") {
    const std::size_t n = 8192;
    const int rate = 16000;
    RoomIrSpec room;
    room.direct_delay_s = 0.005;
    room.tail_onset_s = 0.004;
    room.t60_s = 0.2;
    room.tail_gain = 0.25;
    room.length_s = static_cast<double>(n) / rate;  // 0.512 s
    room.seed = 9;
    auto ir = synth_room_ir(room, rate);

    Decomposition d;
    d.lti_ir = ir;
    d.lti_spectrum = rfft(ir.samples, n);
    d.rtv_power_spectrum.assign(n / 2 + 1, 1e-8);
    d.sdti_power_spectrum.assign(n / 2 + 1, 1e-9);

    AnalyzeOptions opts;
    opts.bands = BandSpec{BandKind::octave, 125.0, 4000.0};
    opts.source_distance_m = 0.5;
    auto report = analyze(d, opts);

    CHECK(report.sample_rate_hz == rate);
    CHECK(report.n_fft == n);
    CHECK(report.lti_magnitude_db.size() == n / 2 + 1);
    CHECK(!report.band_snr_db.empty());
    REQUIRE(!report.decay_curves.empty());
    CHECK(report.decay_curves[0].label == "full");
    CHECK(report.decay_curves.size() == 1 + report.band_snr_db.size());
    CHECK(report.rt_seconds.size() == report.decay_curves.size());

    // the full-band estimates see the synthetic room's parameters
    bool found_full = false;
    for (const auto& rt : report.rt_seconds)
        if (rt.label == "full") {
            found_full = true;
            REQUIRE(rt.t30_s.has_value());
            CHECK(*rt.t30_s == doctest::Approx(0.2).epsilon(0.1));
        }
    CHECK(found_full);
    CHECK(report.direct_peak_index == 80);  // 5 ms at 16 kHz

    auto split = split_direct_indirect(ir);
    CHECK(report.drr_db == doctest::Approx(split.drr_db).epsilon(1e-12));
    REQUIRE(report.reverberation_radius_m.has_value());
    CHECK(*report.reverberation_radius_m ==
          doctest::Approx(reverberation_radius(report.drr_db, 0.5)).epsilon(1e-12));
    REQUIRE(report.placement_ok.has_value());
    CHECK(*report.placement_ok == placement_verdict(0.5, *report.reverberation_radius_m));

    SUBCASE("no distance, no radius") {
        opts.source_distance_m.reset();
        auto r2 = analyze(d, opts);
        CHECK_FALSE(r2.reverberation_radius_m.has_value());
        CHECK_FALSE(r2.placement_ok.has_value());
    }
}
