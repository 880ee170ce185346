#include "vbisnr/scan.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <future>

namespace vbisnr {

std::string_view to_string(ChannelStatus status) noexcept {
    switch (status) {
    case ChannelStatus::Measured: return "measured";
    case ChannelStatus::NoCapture: return "no-capture";
    case ChannelStatus::UnsynchronizedSkipped: return "unsynchronized-skipped";
    }
    return "unknown";
}

ChannelStatus parse_status(std::string_view text) {
    for (auto s : {ChannelStatus::Measured, ChannelStatus::NoCapture, ChannelStatus::UnsynchronizedSkipped}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw InvalidInput(fmt::format("unknown channel status '{}'", text));
}

PairedMeasurement measure_capture(const CaptureFile& capture, const MeasureConfig& config) {
    const std::size_t frames = std::min(capture.header.frames, config.max_frames);
    if (frames == 0) {
        throw MeasurementError("capture contains no frames");
    }
    const auto lines = extract_vbi_lines(capture, {0, frames});

    MeasureConfig plain = config;
    plain.filter.reset();
    MeasureConfig lowpass = config;
    lowpass.filter = config.filter.value_or(FilterSpec{});

    return {accumulate(lines, plain), accumulate(lines, lowpass)};
}

namespace {

ScanEntry scan_channel(const ChannelEntry& channel, const CaptureSource& source,
                       const MeasureConfig& config) {
    ScanEntry entry;
    entry.channel = channel;
    const auto it = source.find(channel.designation);
    if (it == source.end()) {
        entry.status = ChannelStatus::NoCapture;
        return entry;
    }
    try {
        auto pair = measure_capture(it->second, config);
        entry.snr1 = pair.unfiltered;
        entry.snr2 = pair.filtered;
        entry.status = ChannelStatus::Measured;
    } catch (const std::exception& e) {
        entry.status = ChannelStatus::UnsynchronizedSkipped;
        entry.note = e.what();
    }
    return entry;
}

} // namespace

ScanReport scan(const ChannelPlan& plan, const CaptureSource& source, const ScanOptions& options) {
    if (plan.entries.empty()) {
        throw InvalidInput("channel plan is empty");
    }
    const auto& config = options.config;

    ScanReport report;
    report.settings.full_scale = config.full_scale;
    report.settings.max_frames = config.max_frames;
    report.settings.snr_cap_db = config.snr_cap_db;
    report.settings.filter = config.filter.value_or(FilterSpec{});
    report.entries.reserve(plan.entries.size());

    if (options.parallel && plan.entries.size() > 1) {
        std::vector<std::future<ScanEntry>> pending;
        pending.reserve(plan.entries.size());
        for (const auto& channel : plan.entries) {
            pending.push_back(std::async(std::launch::async, [&channel, &source, &config] {
                return scan_channel(channel, source, config);
            }));
        }
        for (auto& f : pending) {
            report.entries.push_back(f.get());
        }
    } else {
        for (const auto& channel : plan.entries) {
            report.entries.push_back(scan_channel(channel, source, config));
        }
    }

    std::stable_sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
        if (a.channel.video_carrier_mhz != b.channel.video_carrier_mhz) {
            return a.channel.video_carrier_mhz < b.channel.video_carrier_mhz;
        }
        return a.channel.designation < b.channel.designation;
    });
    return report;
}

} // namespace vbisnr
