#include "oracles.hpp"

#include "vbisnr/error.hpp"
#include "vbisnr/filter.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace vbisnr;

namespace {

constexpr double kFs = 13.5e6;

std::vector<double> tone(std::size_t n, double f, double amplitude, double offset = 0.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = offset + amplitude * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / kFs);
    }
    return x;
}

} // namespace

TEST_CASE("design_lowpass defaults") {
    const auto taps = design_lowpass(FilterSpec{}, kFs);
    REQUIRE(taps.size() % 2 == 1);

    CHECK(std::accumulate(taps.taps.begin(), taps.taps.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    for (std::size_t i = 0; i < taps.size(); ++i) {
        CHECK(taps.taps[i] == taps.taps[taps.size() - 1 - i]);
    }
    // Independent direct evaluation of the response.
    CHECK(oracle::response_db(taps.taps, 5.5e6, kFs) <= -60.0);
    CHECK(oracle::response_db(taps.taps, 0.5e6, kFs) >= -1.0);
    for (double f = 2.5e6; f <= kFs / 2.0; f += 10e3) {
        CHECK(oracle::response_db(taps.taps, f, kFs) <= -60.0);
    }
    CHECK(response_db(taps, 1.0e6, kFs) == doctest::Approx(oracle::response_db(taps.taps, 1.0e6, kFs)).epsilon(1e-9));
    CHECK(taps.noise_gain() > 0.25);
    CHECK(taps.noise_gain() < 0.45);
}

TEST_CASE("design_lowpass length tracks attenuation and transition") {
    FilterSpec loose;
    loose.stopband_atten_db = 40.0;
    FilterSpec sharp;
    sharp.transition_hz = 0.25e6;
    const auto a = design_lowpass(loose, kFs);
    const auto b = design_lowpass(FilterSpec{}, kFs);
    const auto c = design_lowpass(sharp, kFs);
    CHECK(a.size() < b.size());
    CHECK(b.size() < c.size());
    CHECK(oracle::response_db(a.taps, 2.5e6, kFs) <= -40.0);
    CHECK(oracle::response_db(c.taps, 2.25e6, kFs) <= -60.0);
}

TEST_CASE("design_lowpass rejects bad specs") {
    FilterSpec spec;
    spec.cutoff_hz = 6.0e6;
    spec.transition_hz = 1.0e6;
    try {
        (void)design_lowpass(spec, kFs);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        CHECK(msg.find("6000000") != std::string::npos);
        CHECK(msg.find("6750000") != std::string::npos);
    }
    FilterSpec weak;
    weak.stopband_atten_db = 10.0;
    CHECK_THROWS_AS((void)design_lowpass(weak, kFs), InvalidInput);
    FilterSpec negative;
    negative.cutoff_hz = -1.0;
    CHECK_THROWS_AS((void)design_lowpass(negative, kFs), InvalidInput);
}

TEST_CASE("apply_filter") {
    const auto taps = design_lowpass(FilterSpec{}, kFs);

    SUBCASE("output length and DC passthrough") {
        const std::vector<double> x(700, 60.0);
        const auto y = apply_filter(x, taps);
        CHECK(y.size() == x.size() - (taps.size() - 1));
        for (double v : y) {
            CHECK(v == doctest::Approx(60.0).epsilon(1e-6 / 60.0));
        }
    }
    SUBCASE("matches an independent valid convolution") {
        std::mt19937 rng(1);
        std::normal_distribution<double> n(0.0, 5.0);
        std::vector<double> x(500);
        for (auto& v : x) v = n(rng);
        const auto y = apply_filter(x, taps);
        const auto ref = oracle::valid_convolution(x, taps.taps);
        REQUIRE(y.size() == ref.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-12));
        }
    }
    SUBCASE("5.5 MHz tone is suppressed") {
        const auto x = tone(2000, 5.5e6, 10.0);
        const auto y = apply_filter(x, taps);
        CHECK(oracle::rms(y) <= 0.01 * oracle::rms(x));
    }
    SUBCASE("0.5 MHz tone passes within 12%") {
        const auto x = tone(2000, 0.5e6, 10.0);
        const auto y = apply_filter(x, taps);
        const double peak = *std::max_element(y.begin(), y.end());
        CHECK(std::abs(peak - 10.0) <= 0.12 * 10.0);
        // Zero phase: output sample i lines up with input i + delay.
        const std::size_t d = taps.delay();
        for (std::size_t i = 0; i < y.size(); i += 97) {
            CHECK(std::abs(y[i] - x[i + d]) <= 0.12 * 10.0);
        }
    }
    SUBCASE("input shorter than the filter") {
        const std::vector<double> x(taps.size(), 1.0);
        CHECK_THROWS_AS((void)apply_filter(x, taps), InvalidInput);
    }
}

TEST_CASE("property: filtering is linear") {
    const auto taps = design_lowpass(FilterSpec{}, kFs);
    std::mt19937 rng(3);
    std::normal_distribution<double> n(0.0, 20.0);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(400), y(400), z(400);
        const double a = coef(rng), b = coef(rng);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = n(rng);
            y[i] = n(rng);
            z[i] = a * x[i] + b * y[i];
        }
        const auto fx = apply_filter(x, taps);
        const auto fy = apply_filter(y, taps);
        const auto fz = apply_filter(z, taps);
        for (std::size_t i = 0; i < fz.size(); ++i) {
            CHECK(std::abs(fz[i] - (a * fx[i] + b * fy[i])) <= 1e-9);
        }
    }
}
