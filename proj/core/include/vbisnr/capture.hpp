#pragma once

#include "vbisnr/line_record.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbisnr {

// On-disk layout:
//   "VBI1" | u32 LE header length | UTF-8 header (key=value\n ...) | payload
// Payload is frame-major, then line-major, one or two little-endian bytes
// per sample depending on bit depth.

inline constexpr std::string_view kCaptureMagic = "VBI1";
inline constexpr int kCaptureFormatVersion = 1;

struct CaptureHeader {
    int format_version = kCaptureFormatVersion;
    int bit_depth = 8;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::size_t samples_per_line = 864;
    std::size_t lines_per_frame = 1;
    std::size_t frames = 0;
    std::vector<std::size_t> vbi_line_indices;
    std::string channel_label;
    /// Any other keys (generator settings, warnings). Written sorted by key.
    std::map<std::string, std::string> extra;

    [[nodiscard]] std::size_t bytes_per_sample() const noexcept { return bit_depth <= 8 ? 1 : 2; }
    [[nodiscard]] std::size_t expected_samples() const noexcept {
        return frames * lines_per_frame * samples_per_line;
    }
    [[nodiscard]] std::size_t expected_payload_bytes() const noexcept {
        return expected_samples() * bytes_per_sample();
    }

    /// Throws InvalidInput on an unsupported version, bad bit depth,
    /// zero dimensions or a VBI index >= lines_per_frame.
    void validate() const;

    friend bool operator==(const CaptureHeader&, const CaptureHeader&) = default;
};

struct CaptureFile {
    CaptureHeader header;
    std::vector<std::uint16_t> samples;

    [[nodiscard]] std::span<const std::uint16_t> line(std::size_t frame, std::size_t line_index) const;

    /// Header checks plus payload size and sample range.
    void validate() const;

    friend bool operator==(const CaptureFile&, const CaptureFile&) = default;
};

[[nodiscard]] std::vector<std::uint8_t> encode_capture(const CaptureFile& capture);
/// Throws InvalidInput on bad magic, header syntax, unknown version,
/// truncated or oversized payload.
[[nodiscard]] CaptureFile decode_capture(std::span<const std::uint8_t> bytes);

/// Throws IoError when the file cannot be read/written, InvalidInput when
/// the contents are malformed.
[[nodiscard]] CaptureFile read_capture(const std::filesystem::path& path);
void write_capture(const CaptureFile& capture, const std::filesystem::path& path);

struct FrameRange {
    std::size_t first = 0;
    std::size_t count = 0;  ///< 0 means "through the last frame"
};

/// One LineRecord per (frame, VBI line) in frame order. Throws
/// MeasurementError when the capture lists no VBI lines and InvalidInput
/// when the range lies outside the capture.
[[nodiscard]] std::vector<LineRecord> extract_vbi_lines(
    const CaptureFile& capture, FrameRange frames = {},
    std::optional<SampleWindow> window_override = std::nullopt);

} // namespace vbisnr
