#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vbisnr {

inline constexpr int kMinBitDepth = 8;
inline constexpr int kMaxBitDepth = 10;

/// Default ADC rate: ITU-R BT.601 luma sampling.
inline constexpr double kDefaultSampleRateHz = 13.5e6;

/// Half-open sample range [start, end) of a line used for measurement.
struct SampleWindow {
    std::size_t start = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end > start ? end - start : 0; }
    friend bool operator==(const SampleWindow&, const SampleWindow&) = default;
};

/// Default measurement window for an n-sample line: skips the leading 12%
/// (sync, burst) and the trailing 2% (front porch).
/// start = ceil(0.12 n), end = n - floor(0.02 n).
[[nodiscard]] SampleWindow default_window(std::size_t samples_per_line) noexcept;

/// One digitized video line.
struct LineRecord {
    std::vector<std::uint16_t> samples;
    int bit_depth = 8;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::size_t line_index = 0;
    std::size_t frame_index = 0;
    SampleWindow window;

    /// Throws InvalidInput naming the line/frame when an invariant is broken:
    /// bit depth outside 8..10, non-positive rate, sample >= 2^bit_depth,
    /// window out of range or shorter than 2 samples.
    void validate() const;

    [[nodiscard]] std::span<const std::uint16_t> windowed() const noexcept {
        return std::span<const std::uint16_t>(samples).subspan(window.start, window.size());
    }

    /// "frame F line L", used in diagnostics.
    [[nodiscard]] std::string describe() const;
};

/// Builds a LineRecord with the default window; validates it.
[[nodiscard]] LineRecord make_line(std::vector<std::uint16_t> samples, int bit_depth = 8,
                                   double sample_rate_hz = kDefaultSampleRateHz,
                                   std::size_t line_index = 0, std::size_t frame_index = 0);

} // namespace vbisnr
