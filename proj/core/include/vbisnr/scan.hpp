#pragma once

#include "vbisnr/capture.hpp"
#include "vbisnr/channel_plan.hpp"
#include "vbisnr/measure.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vbisnr {

enum class ChannelStatus { Measured, NoCapture, UnsynchronizedSkipped };

[[nodiscard]] std::string_view to_string(ChannelStatus status) noexcept;
[[nodiscard]] ChannelStatus parse_status(std::string_view text);

struct ScanEntry {
    ChannelEntry channel;
    std::optional<Measurement> snr1;  ///< unfiltered
    std::optional<Measurement> snr2;  ///< low-pass filtered
    ChannelStatus status = ChannelStatus::NoCapture;
    /// Why a channel was not measured, if known.
    std::string note;

    friend bool operator==(const ScanEntry&, const ScanEntry&) = default;
};

/// Settings the report was produced with.
struct ScanSettings {
    std::optional<double> full_scale;  ///< unset: derived from each capture's bit depth
    std::size_t max_frames = kMaxAccumulatedFrames;
    double snr_cap_db = kDefaultSnrCapDb;
    FilterSpec filter;

    friend bool operator==(const ScanSettings&, const ScanSettings&) = default;
};

struct ScanReport {
    /// Sorted by video carrier frequency, then designation.
    std::vector<ScanEntry> entries;
    ScanSettings settings;
    /// Caller supplied; left empty by scan() so output stays reproducible.
    std::string timestamp;

    friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

struct ScanOptions {
    MeasureConfig config;
    /// Fan channels out over std::async.
    bool parallel = true;
};

using CaptureSource = std::map<std::string, CaptureFile, std::less<>>;

/// SNR1 and SNR2 come from the same pooled VBI samples of a channel's
/// capture (first config.max_frames frames). Channels without a capture are
/// reported as NoCapture; a capture that cannot be measured is reported as
/// UnsynchronizedSkipped with the reason in `note`. config.filter defaults
/// to the 2 MHz low-pass when unset.
[[nodiscard]] ScanReport scan(const ChannelPlan& plan, const CaptureSource& source,
                              const ScanOptions& options = {});

/// Measures a single capture the way scan() does; throws on failure.
struct PairedMeasurement {
    Measurement unfiltered;
    Measurement filtered;
};
[[nodiscard]] PairedMeasurement measure_capture(const CaptureFile& capture,
                                                const MeasureConfig& config);

} // namespace vbisnr
