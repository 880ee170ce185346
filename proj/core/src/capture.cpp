#include "vbisnr/capture.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace vbisnr {

namespace {

constexpr std::size_t kPrefixBytes = 8;  // magic + u32 header length

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidInput(fmt::format("capture header: bad value '{}' for key '{}'", text, key));
    }
    return value;
}

std::vector<std::size_t> parse_index_list(std::string_view key, std::string_view text) {
    std::vector<std::size_t> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_number<std::size_t>(key, text.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::string header_text(const CaptureHeader& h) {
    std::string text;
    auto put = [&text](std::string_view key, const auto& value) {
        text += fmt::format("{}={}\n", key, value);
    };
    put("format_version", h.format_version);
    put("bit_depth", h.bit_depth);
    put("sample_rate_hz", h.sample_rate_hz);
    put("samples_per_line", h.samples_per_line);
    put("lines_per_frame", h.lines_per_frame);
    put("frames", h.frames);
    put("vbi_line_indices", fmt::format("{}", fmt::join(h.vbi_line_indices, ",")));
    put("channel_label", h.channel_label);
    for (const auto& [key, value] : h.extra) {
        put(key, value);
    }
    return text;
}

bool is_reserved_key(std::string_view key) {
    static const std::set<std::string_view> reserved{
        "format_version", "bit_depth", "sample_rate_hz", "samples_per_line",
        "lines_per_frame", "frames", "vbi_line_indices", "channel_label"};
    return reserved.contains(key);
}

} // namespace

void CaptureHeader::validate() const {
    if (format_version != kCaptureFormatVersion) {
        throw InvalidInput(fmt::format("unsupported capture format_version {} (expected {})",
                                       format_version, kCaptureFormatVersion));
    }
    if (bit_depth < kMinBitDepth || bit_depth > kMaxBitDepth) {
        throw InvalidInput(fmt::format("capture bit depth {} outside {}..{}", bit_depth,
                                       kMinBitDepth, kMaxBitDepth));
    }
    if (!(sample_rate_hz > 0.0)) {
        throw InvalidInput(fmt::format("capture sample rate must be positive, got {}", sample_rate_hz));
    }
    if (samples_per_line == 0 || lines_per_frame == 0) {
        throw InvalidInput("capture needs non-zero samples_per_line and lines_per_frame");
    }
    for (const auto idx : vbi_line_indices) {
        if (idx >= lines_per_frame) {
            throw InvalidInput(fmt::format("VBI line index {} is not below lines_per_frame {}", idx,
                                           lines_per_frame));
        }
    }
    if (channel_label.find('\n') != std::string::npos) {
        throw InvalidInput("channel label must not contain a newline");
    }
    for (const auto& [key, value] : extra) {
        if (key.empty() || key.find_first_of("=\n") != std::string::npos || is_reserved_key(key) ||
            value.find('\n') != std::string::npos) {
            throw InvalidInput(fmt::format("invalid extra header entry '{}'", key));
        }
    }
}

std::span<const std::uint16_t> CaptureFile::line(std::size_t frame, std::size_t line_index) const {
    if (frame >= header.frames || line_index >= header.lines_per_frame) {
        throw InvalidInput(fmt::format("frame {} line {} outside capture ({} frames x {} lines)",
                                       frame, line_index, header.frames, header.lines_per_frame));
    }
    const std::size_t offset = (frame * header.lines_per_frame + line_index) * header.samples_per_line;
    return std::span<const std::uint16_t>(samples).subspan(offset, header.samples_per_line);
}

void CaptureFile::validate() const {
    header.validate();
    if (samples.size() != header.expected_samples()) {
        throw InvalidInput(fmt::format("capture holds {} samples, header implies {}", samples.size(),
                                       header.expected_samples()));
    }
    const auto limit = 1u << header.bit_depth;
    const auto bad = std::find_if(samples.begin(), samples.end(),
                                  [limit](std::uint16_t v) { return v >= limit; });
    if (bad != samples.end()) {
        throw InvalidInput(fmt::format("sample {} at index {} exceeds the {}-bit range", *bad,
                                       bad - samples.begin(), header.bit_depth));
    }
}

std::vector<std::uint8_t> encode_capture(const CaptureFile& capture) {
    capture.validate();
    const auto text = header_text(capture.header);
    std::vector<std::uint8_t> out;
    out.reserve(kPrefixBytes + text.size() + capture.header.expected_payload_bytes());
    out.insert(out.end(), kCaptureMagic.begin(), kCaptureMagic.end());
    put_u32le(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    const bool wide = capture.header.bytes_per_sample() == 2;
    for (const auto v : capture.samples) {
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        if (wide) {
            out.push_back(static_cast<std::uint8_t>(v >> 8));
        }
    }
    return out;
}

CaptureFile decode_capture(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kPrefixBytes ||
        !std::equal(kCaptureMagic.begin(), kCaptureMagic.end(), bytes.begin())) {
        throw InvalidInput("not a capture file (missing VBI1 magic)");
    }
    std::uint32_t header_len = 0;
    for (int i = 0; i < 4; ++i) {
        header_len |= static_cast<std::uint32_t>(bytes[4 + i]) << (8 * i);
    }
    if (bytes.size() - kPrefixBytes < header_len) {
        throw InvalidInput(fmt::format("capture header truncated: {} bytes declared, {} present",
                                       header_len, bytes.size() - kPrefixBytes));
    }
    const std::string_view text(reinterpret_cast<const char*>(bytes.data() + kPrefixBytes), header_len);

    std::map<std::string, std::string, std::less<>> kv;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        ++line_no;
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto entry = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (entry.empty()) {
            continue;
        }
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw InvalidInput(fmt::format("capture header line {}: expected key=value", line_no));
        }
        const std::string key(entry.substr(0, eq));
        if (!kv.emplace(key, std::string(entry.substr(eq + 1))).second) {
            throw InvalidInput(fmt::format("capture header: duplicate key '{}'", key));
        }
    }

    auto take = [&kv](std::string_view key) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw InvalidInput(fmt::format("capture header: missing key '{}'", key));
        }
        auto value = std::move(it->second);
        kv.erase(it);
        return value;
    };

    CaptureFile capture;
    auto& h = capture.header;
    h.format_version = parse_number<int>("format_version", take("format_version"));
    if (h.format_version != kCaptureFormatVersion) {
        throw InvalidInput(fmt::format("unsupported capture format_version {} (expected {})",
                                       h.format_version, kCaptureFormatVersion));
    }
    h.bit_depth = parse_number<int>("bit_depth", take("bit_depth"));
    h.sample_rate_hz = parse_number<double>("sample_rate_hz", take("sample_rate_hz"));
    h.samples_per_line = parse_number<std::size_t>("samples_per_line", take("samples_per_line"));
    h.lines_per_frame = parse_number<std::size_t>("lines_per_frame", take("lines_per_frame"));
    h.frames = parse_number<std::size_t>("frames", take("frames"));
    h.vbi_line_indices = parse_index_list("vbi_line_indices", take("vbi_line_indices"));
    h.channel_label = take("channel_label");
    for (auto& [key, value] : kv) {
        h.extra.emplace(key, std::move(value));
    }
    h.validate();

    const auto payload = bytes.subspan(kPrefixBytes + header_len);
    const std::size_t expected = h.expected_payload_bytes();
    if (payload.size() < expected) {
        throw InvalidInput(fmt::format("capture payload truncated: expected {} bytes, got {}",
                                       expected, payload.size()));
    }
    if (payload.size() > expected) {
        throw InvalidInput(fmt::format(
            "capture payload does not match header: expected {} bytes, got {}", expected,
            payload.size()));
    }

    capture.samples.resize(h.expected_samples());
    const bool wide = h.bytes_per_sample() == 2;
    for (std::size_t i = 0; i < capture.samples.size(); ++i) {
        capture.samples[i] = wide ? static_cast<std::uint16_t>(payload[2 * i] | (payload[2 * i + 1] << 8))
                                  : payload[i];
    }
    capture.validate();
    return capture;
}

CaptureFile read_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open capture '{}'", path.string()));
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError(fmt::format("error reading capture '{}'", path.string()));
    }
    try {
        return decode_capture(bytes);
    } catch (const InvalidInput& e) {
        throw InvalidInput(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_capture(const CaptureFile& capture, const std::filesystem::path& path) {
    const auto bytes = encode_capture(capture);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError(fmt::format("error writing '{}'", path.string()));
    }
}

std::vector<LineRecord> extract_vbi_lines(const CaptureFile& capture, FrameRange frames,
                                          std::optional<SampleWindow> window_override) {
    const auto& h = capture.header;
    if (h.vbi_line_indices.empty()) {
        throw MeasurementError(
            "capture lists no VBI lines; specify clean (blanked, no teletext or test signal) "
            "lines in vbi_line_indices");
    }
    if (frames.first >= h.frames) {
        throw InvalidInput(fmt::format("first frame {} not in capture of {} frames", frames.first, h.frames));
    }
    const std::size_t count = frames.count == 0 ? h.frames - frames.first : frames.count;
    if (frames.first + count > h.frames) {
        throw InvalidInput(fmt::format("frames [{}, {}) exceed capture of {} frames", frames.first,
                                       frames.first + count, h.frames));
    }
    const auto window = window_override.value_or(default_window(h.samples_per_line));

    std::vector<LineRecord> lines;
    lines.reserve(count * h.vbi_line_indices.size());
    for (std::size_t f = frames.first; f < frames.first + count; ++f) {
        for (const auto idx : h.vbi_line_indices) {
            const auto raw = capture.line(f, idx);
            LineRecord rec;
            rec.samples.assign(raw.begin(), raw.end());
            rec.bit_depth = h.bit_depth;
            rec.sample_rate_hz = h.sample_rate_hz;
            rec.line_index = idx;
            rec.frame_index = f;
            rec.window = window;
            rec.validate();
            lines.push_back(std::move(rec));
        }
    }
    return lines;
}

} // namespace vbisnr
