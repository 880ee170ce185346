#include "vbisnr/channel_plan.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <set>

namespace vbisnr {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) {
            return fields;
        }
        line.remove_prefix(comma + 1);
    }
}

} // namespace

const ChannelEntry* ChannelPlan::find(std::string_view designation) const noexcept {
    const auto it = std::find_if(entries.begin(), entries.end(),
                                 [designation](const auto& e) { return e.designation == designation; });
    return it == entries.end() ? nullptr : &*it;
}

ChannelPlan parse_plan(std::string_view text) {
    ChannelPlan plan;
    std::set<std::string, std::less<>> seen;
    bool have_header = false;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line_no;
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto raw = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (raw.empty() || raw.front() == '#') {
            continue;
        }
        const auto fields = split_fields(raw);
        if (!have_header) {
            if (fields.size() != 3 || fields[0] != "designation" || fields[1] != "name" ||
                fields[2] != "video_carrier_mhz") {
                throw InvalidInput(fmt::format(
                    "plan line {}: expected header 'designation,name,video_carrier_mhz'", line_no));
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw InvalidInput(fmt::format("plan line {}: expected 3 fields, found {}", line_no, fields.size()));
        }
        if (fields[0].empty()) {
            throw InvalidInput(fmt::format("plan line {}: empty designation", line_no));
        }
        double mhz = 0.0;
        const auto* end = fields[2].data() + fields[2].size();
        const auto [ptr, ec] = std::from_chars(fields[2].data(), end, mhz);
        if (fields[2].empty() || ec != std::errc{} || ptr != end) {
            throw InvalidInput(fmt::format("plan line {}: bad frequency '{}'", line_no, fields[2]));
        }
        if (!(mhz > kMinCarrierMhz && mhz < kMaxCarrierMhz)) {
            throw InvalidInput(fmt::format("plan line {}: frequency {} MHz outside ({}, {})", line_no,
                                           mhz, kMinCarrierMhz, kMaxCarrierMhz));
        }
        if (!seen.emplace(fields[0]).second) {
            throw InvalidInput(fmt::format("plan line {}: duplicate designation '{}'", line_no, fields[0]));
        }
        plan.entries.push_back({std::string(fields[0]), std::string(fields[1]), mhz});
    }
    if (!have_header) {
        throw InvalidInput("plan is empty: missing header 'designation,name,video_carrier_mhz'");
    }
    return plan;
}

std::string format_plan(const ChannelPlan& plan) {
    std::string out = "designation,name,video_carrier_mhz\n";
    for (const auto& e : plan.entries) {
        out += fmt::format("{},{},{}\n", e.designation, e.name, e.video_carrier_mhz);
    }
    return out;
}

} // namespace vbisnr
