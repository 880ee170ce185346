#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vbisnr {

struct ChannelEntry {
    std::string designation;  ///< e.g. "S02", "C06"
    std::string name;
    double video_carrier_mhz = 0.0;

    friend bool operator==(const ChannelEntry&, const ChannelEntry&) = default;
};

/// Valid vision-carrier range, exclusive on both ends.
inline constexpr double kMinCarrierMhz = 40.0;
inline constexpr double kMaxCarrierMhz = 1000.0;

struct ChannelPlan {
    std::vector<ChannelEntry> entries;

    [[nodiscard]] const ChannelEntry* find(std::string_view designation) const noexcept;
    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
};

/// CSV with the header "designation,name,video_carrier_mhz". Blank lines and
/// lines starting with '#' are ignored; fields are trimmed. Errors carry the
/// 1-based line number of the offending row.
[[nodiscard]] ChannelPlan parse_plan(std::string_view text);

[[nodiscard]] std::string format_plan(const ChannelPlan& plan);

} // namespace vbisnr
