#pragma once

#include "vbisnr/filter.hpp"
#include "vbisnr/line_record.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace vbisnr {

/// Nominal 8-bit video excursion: 235 - 16.
inline constexpr double kFullScale8Bit = 219.0;
inline constexpr std::size_t kMaxAccumulatedFrames = 30;
inline constexpr double kDefaultSnrCapDb = 100.0;

struct MeasureConfig {
    /// A_FS. When unset, full_scale_for(bit_depth) is used.
    std::optional<double> full_scale;
    std::size_t max_frames = kMaxAccumulatedFrames;
    /// Reported when the noise RMS is exactly zero.
    double snr_cap_db = kDefaultSnrCapDb;
    /// When set, noise is measured on low-pass filtered samples.
    std::optional<FilterSpec> filter;

    [[nodiscard]] double full_scale_for(int bit_depth) const;
};

/// 219 * 2^(bit_depth - 8).
[[nodiscard]] double default_full_scale(int bit_depth);

struct Measurement {
    double v_ref = 0.0;         ///< black level, code units
    double v_n = 0.0;           ///< noise RMS, code units
    double snr_db = 0.0;
    double error_margin = 0.0;  ///< v_n / sqrt(n_samples)
    std::size_t n_samples = 0;
    bool filtered = false;
    std::size_t frames_used = 0;
    bool saturated = false;
    /// Sum of squared filter taps (1 when unfiltered). The filtered RMS is
    /// divided by sqrt(noise_gain) so v_n estimates full-band white noise.
    double noise_gain = 1.0;

    /// Error margin expressed in dB via the local slope of 20 log10(A/v).
    [[nodiscard]] double error_margin_db() const noexcept;

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct SnrValue {
    double snr_db = 0.0;
    bool saturated = false;
};

/// Arithmetic mean of the windowed samples.
[[nodiscard]] double estimate_reference_level(const LineRecord& line);

/// sqrt( sum (x_i - v_ref)^2 / (N - 1) ) over the window.
[[nodiscard]] double noise_rms(const LineRecord& line, double v_ref);
[[nodiscard]] double noise_rms(std::span<const double> samples, double v_ref);

/// 20 log10(full_scale / v_n); the configured cap when v_n == 0.
[[nodiscard]] SnrValue snr_db(double v_n, double full_scale, double snr_cap_db = kDefaultSnrCapDb);
[[nodiscard]] SnrValue snr_db(double v_n, const MeasureConfig& config, int bit_depth = 8);

/// v_n / sqrt(n_samples).
[[nodiscard]] double error_margin(double v_n, std::size_t n_samples);

[[nodiscard]] Measurement measure_line(const LineRecord& line, const MeasureConfig& config);

/// Pools the windowed samples of every line into one population. The frame
/// count (distinct frame_index values) must not exceed config.max_frames.
/// Result does not depend on the order of `lines`.
[[nodiscard]] Measurement accumulate(std::span<const LineRecord> lines, const MeasureConfig& config);

} // namespace vbisnr
