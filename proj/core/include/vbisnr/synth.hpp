#pragma once

#include "vbisnr/capture.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vbisnr {

/// PAL B/G vision-to-sound carrier spacing.
inline constexpr double kSoundCarrierOffsetHz = 5.5e6;

struct Interferer {
    double frequency_hz = kSoundCarrierOffsetHz;
    double amplitude = 0.0;  ///< code units
    double phase_rad = 0.0;

    friend bool operator==(const Interferer&, const Interferer&) = default;
};

struct SynthConfig {
    double black_level = 60.0;
    double noise_sigma = 0.0;
    std::vector<Interferer> interferers;
    std::uint64_t seed = 1;
    std::size_t samples_per_line = 864;
    double sample_rate_hz = kDefaultSampleRateHz;
    int bit_depth = 8;
    std::size_t frames = 30;
    std::size_t lines_per_frame = 4;
    /// Blanked lines. The remaining lines carry random picture-like data.
    std::vector<std::size_t> vbi_line_indices{1, 2};
    /// Prepend a sync tip and colour burst over the first 12% of each VBI line.
    bool sync = false;
    std::string channel_label;

    void validate() const;
};

struct SynthResult {
    CaptureFile capture;
    std::size_t clip_count = 0;
    std::size_t total_samples = 0;
    /// More than 1% of samples were clipped.
    bool clip_warning = false;
};

/// Blanked lines are black_level + N(0, sigma) + sum of interferers, rounded
/// half away from zero and clipped to [0, 2^bits - 1]. Interferer phase runs
/// continuously over the whole capture. Same config, same bytes.
[[nodiscard]] SynthResult synthesize(const SynthConfig& config);

} // namespace vbisnr
