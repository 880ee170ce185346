#pragma once

#include <complex>
#include <span>
#include <vector>

namespace vbisnr {

enum class FilterKind { WindowedSincLowpass };

/// Low-pass pre-filter used for the "filtered" SNR measurement.
/// cutoff_hz is the passband edge; the stopband starts at cutoff_hz + transition_hz.
struct FilterSpec {
    double cutoff_hz = 2.0e6;
    double transition_hz = 0.5e6;
    double stopband_atten_db = 60.0;
    FilterKind kind = FilterKind::WindowedSincLowpass;

    /// Throws InvalidInput unless cutoff/transition are positive,
    /// cutoff + transition < sample_rate/2 and attenuation >= 20 dB.
    void validate(double sample_rate_hz) const;

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Odd-length, symmetric FIR taps with unity DC gain.
struct FirTaps {
    std::vector<double> taps;

    [[nodiscard]] std::size_t size() const noexcept { return taps.size(); }
    [[nodiscard]] std::size_t delay() const noexcept { return (taps.size() - 1) / 2; }

    /// Sum of squared taps: output/input variance ratio for white noise.
    [[nodiscard]] double noise_gain() const noexcept;
};

/// Kaiser-windowed sinc low-pass. The length starts from Kaiser's estimate
/// and grows until the sampled stopband meets spec.stopband_atten_db.
[[nodiscard]] FirTaps design_lowpass(const FilterSpec& spec, double sample_rate_hz);

/// H(f) = sum_k taps[k] e^{-j 2 pi f k / fs}.
[[nodiscard]] std::complex<double> frequency_response(const FirTaps& taps, double freq_hz,
                                                      double sample_rate_hz);

/// |H(f)| in dB.
[[nodiscard]] double response_db(const FirTaps& taps, double freq_hz, double sample_rate_hz);

/// Valid-region convolution with the group delay removed. Output sample i
/// is centred on input sample i + delay(); output length is
/// input.size() - (taps.size() - 1). Throws InvalidInput if the input is not
/// longer than the filter.
[[nodiscard]] std::vector<double> apply_filter(std::span<const double> input, const FirTaps& taps);

} // namespace vbisnr
