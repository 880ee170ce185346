#include "vbisnr/line_record.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace vbisnr {

SampleWindow default_window(std::size_t n) noexcept {
    const std::size_t lead = (12 * n + 99) / 100;  // ceil(0.12 n)
    const std::size_t tail = (2 * n) / 100;        // floor(0.02 n)
    if (lead + tail >= n) {
        return {0, n};
    }
    return {lead, n - tail};
}

std::string LineRecord::describe() const {
    return fmt::format("frame {} line {}", frame_index, line_index);
}

void LineRecord::validate() const {
    if (bit_depth < kMinBitDepth || bit_depth > kMaxBitDepth) {
        throw InvalidInput(fmt::format("{}: bit depth {} outside {}..{}", describe(), bit_depth,
                                       kMinBitDepth, kMaxBitDepth));
    }
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw InvalidInput(fmt::format("{}: sample rate must be positive", describe()));
    }
    if (window.start >= window.end || window.end > samples.size()) {
        throw InvalidInput(fmt::format("{}: window [{}, {}) invalid for {} samples", describe(),
                                       window.start, window.end, samples.size()));
    }
    if (window.size() < 2) {
        throw InvalidInput(fmt::format("{}: measurement window needs at least 2 samples, has {}",
                                       describe(), window.size()));
    }
    const auto limit = static_cast<std::uint32_t>(1u << bit_depth);
    const auto bad = std::find_if(samples.begin(), samples.end(),
                                  [limit](std::uint16_t v) { return v >= limit; });
    if (bad != samples.end()) {
        throw InvalidInput(fmt::format("{}: sample {} at offset {} exceeds {}-bit range", describe(),
                                       *bad, bad - samples.begin(), bit_depth));
    }
}

LineRecord make_line(std::vector<std::uint16_t> samples, int bit_depth, double sample_rate_hz,
                     std::size_t line_index, std::size_t frame_index) {
    LineRecord line;
    line.window = default_window(samples.size());
    line.samples = std::move(samples);
    line.bit_depth = bit_depth;
    line.sample_rate_hz = sample_rate_hz;
    line.line_index = line_index;
    line.frame_index = frame_index;
    line.validate();
    return line;
}

} // namespace vbisnr
