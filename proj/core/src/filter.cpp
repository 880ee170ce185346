#include "vbisnr/filter.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace vbisnr {

void FilterSpec::validate(double sample_rate_hz) const {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw InvalidInput(fmt::format("sample rate must be positive, got {} Hz", sample_rate_hz));
    }
    if (!(cutoff_hz > 0.0) || !(transition_hz > 0.0)) {
        throw InvalidInput(fmt::format("cutoff ({} Hz) and transition ({} Hz) must be positive",
                                       cutoff_hz, transition_hz));
    }
    const double nyquist = sample_rate_hz / 2.0;
    if (!(cutoff_hz + transition_hz < nyquist)) {
        throw InvalidInput(fmt::format(
            "stopband edge {} Hz (cutoff {} Hz + transition {} Hz) must lie below Nyquist {} Hz",
            cutoff_hz + transition_hz, cutoff_hz, transition_hz, nyquist));
    }
    if (!(stopband_atten_db >= 20.0)) {
        throw InvalidInput(
            fmt::format("stopband attenuation must be at least 20 dB, got {}", stopband_atten_db));
    }
}

double FirTaps::noise_gain() const noexcept {
    return std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
}

std::complex<double> frequency_response(const FirTaps& taps, double freq_hz,
                                        double sample_rate_hz) {
    const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < taps.taps.size(); ++k) {
        acc += taps.taps[k] * std::polar(1.0, -omega * static_cast<double>(k));
    }
    return acc;
}

double response_db(const FirTaps& taps, double freq_hz, double sample_rate_hz) {
    const double mag = std::abs(frequency_response(taps, freq_hz, sample_rate_hz));
    return 20.0 * std::log10(std::max(mag, 1e-300));
}

namespace {

double kaiser_beta(double atten_db) {
    if (atten_db > 50.0) {
        return 0.1102 * (atten_db - 8.7);
    }
    if (atten_db >= 21.0) {
        return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
    }
    return 0.0;
}

std::size_t kaiser_length(double atten_db, double transition_hz, double sample_rate_hz) {
    const double delta_omega = 2.0 * std::numbers::pi * transition_hz / sample_rate_hz;
    const auto order = static_cast<std::size_t>(std::ceil((atten_db - 7.95) / (2.285 * delta_omega)));
    std::size_t length = order + 1;
    if (length % 2 == 0) {
        ++length;
    }
    return std::max<std::size_t>(length, 3);
}

FirTaps windowed_sinc(std::size_t length, double corner_hz, double sample_rate_hz, double beta) {
    const double fc = corner_hz / sample_rate_hz;  // cycles/sample
    const double centre = static_cast<double>(length - 1) / 2.0;
    const double norm = std::cyl_bessel_i(0.0, beta);
    FirTaps out;
    out.taps.resize(length);
    for (std::size_t n = 0; n <= length / 2; ++n) {
        const double t = static_cast<double>(n) - centre;
        const double ideal = t == 0.0 ? 2.0 * fc
                                      : std::sin(2.0 * std::numbers::pi * fc * t) /
                                            (std::numbers::pi * t);
        const double r = t / centre;
        const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
        out.taps[n] = ideal * window;
        out.taps[length - 1 - n] = out.taps[n];
    }
    const double dc = std::accumulate(out.taps.begin(), out.taps.end(), 0.0);
    for (auto& t : out.taps) {
        t /= dc;
    }
    return out;
}

double worst_stopband_db(const FirTaps& taps, double edge_hz, double sample_rate_hz) {
    const double nyquist = sample_rate_hz / 2.0;
    const std::size_t points = 16 * taps.size();
    double worst = -1e300;
    for (std::size_t i = 0; i <= points; ++i) {
        const double f = edge_hz + (nyquist - edge_hz) * static_cast<double>(i) / static_cast<double>(points);
        worst = std::max(worst, response_db(taps, f, sample_rate_hz));
    }
    return worst;
}

constexpr std::size_t kMaxTaps = 8191;

} // namespace

FirTaps design_lowpass(const FilterSpec& spec, double sample_rate_hz) {
    spec.validate(sample_rate_hz);
    const double edge = spec.cutoff_hz + spec.transition_hz;
    const double corner = spec.cutoff_hz + spec.transition_hz / 2.0;
    const double beta = kaiser_beta(spec.stopband_atten_db);
    std::size_t length = kaiser_length(spec.stopband_atten_db, spec.transition_hz, sample_rate_hz);
    // Kaiser's estimate can land a fraction of a dB short; widen until it holds.
    for (; length <= kMaxTaps; length += 2) {
        auto taps = windowed_sinc(length, corner, sample_rate_hz, beta);
        if (worst_stopband_db(taps, edge, sample_rate_hz) <= -spec.stopband_atten_db) {
            return taps;
        }
    }
    throw InvalidInput(fmt::format("cannot reach {} dB stopband with at most {} taps",
                                   spec.stopband_atten_db, kMaxTaps));
}

std::vector<double> apply_filter(std::span<const double> input, const FirTaps& taps) {
    const std::size_t length = taps.size();
    if (length == 0 || length % 2 == 0) {
        throw InvalidInput(fmt::format("filter must have an odd, non-zero tap count, got {}", length));
    }
    if (input.size() <= length) {
        throw InvalidInput(fmt::format("input of {} samples must be longer than the {}-tap filter",
                                       input.size(), length));
    }
    std::vector<double> out(input.size() - (length - 1));
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < length; ++k) {
            acc += taps.taps[k] * input[i + k];
        }
        out[i] = acc;
    }
    return out;
}

} // namespace vbisnr
