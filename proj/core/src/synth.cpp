#include "vbisnr/synth.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>

namespace vbisnr {

namespace {

// PAL colour subcarrier, used for the synthetic burst.
constexpr double kBurstHz = 4.43361875e6;

std::string format_interferers(const std::vector<Interferer>& list) {
    std::string out;
    for (const auto& it : list) {
        if (!out.empty()) {
            out += ';';
        }
        out += fmt::format("{}:{}:{}", it.frequency_hz, it.amplitude, it.phase_rad);
    }
    return out;
}

} // namespace

void SynthConfig::validate() const {
    if (bit_depth < kMinBitDepth || bit_depth > kMaxBitDepth) {
        throw InvalidInput(fmt::format("bit depth {} outside {}..{}", bit_depth, kMinBitDepth, kMaxBitDepth));
    }
    const double top = std::ldexp(1.0, bit_depth) - 1.0;
    if (!(black_level >= 0.0 && black_level <= top)) {
        throw InvalidInput(fmt::format("black level {} outside code range [0, {}]", black_level, top));
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidInput(fmt::format("noise sigma must be finite and >= 0, got {}", noise_sigma));
    }
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw InvalidInput("sample rate must be positive");
    }
    if (samples_per_line < 2 || lines_per_frame == 0 || frames == 0) {
        throw InvalidInput("samples_per_line >= 2, lines_per_frame >= 1 and frames >= 1 required");
    }
    for (const auto idx : vbi_line_indices) {
        if (idx >= lines_per_frame) {
            throw InvalidInput(fmt::format("VBI line {} not below lines_per_frame {}", idx, lines_per_frame));
        }
    }
    for (const auto& it : interferers) {
        if (!(it.frequency_hz >= 0.0) || !std::isfinite(it.amplitude) || it.amplitude < 0.0 ||
            !std::isfinite(it.phase_rad)) {
            throw InvalidInput(fmt::format("invalid interferer {} Hz, amplitude {}", it.frequency_hz,
                                           it.amplitude));
        }
    }
}

SynthResult synthesize(const SynthConfig& config) {
    config.validate();

    SynthResult result;
    auto& capture = result.capture;
    auto& h = capture.header;
    h.bit_depth = config.bit_depth;
    h.sample_rate_hz = config.sample_rate_hz;
    h.samples_per_line = config.samples_per_line;
    h.lines_per_frame = config.lines_per_frame;
    h.frames = config.frames;
    h.vbi_line_indices = config.vbi_line_indices;
    h.channel_label = config.channel_label;

    const double scale = std::ldexp(1.0, config.bit_depth - 8);
    const double top = std::ldexp(1.0, config.bit_depth) - 1.0;
    const std::size_t n = config.samples_per_line;

    std::vector<bool> is_vbi(config.lines_per_frame, false);
    for (const auto idx : config.vbi_line_indices) {
        is_vbi[idx] = true;
    }

    // Sync tip over the first 60% of the blanking lead, burst over the next 30%.
    const std::size_t lead = default_window(n).start;
    const std::size_t sync_end = lead * 6 / 10;
    const std::size_t burst_end = lead * 9 / 10;
    const double sync_tip = std::max(config.black_level - 40.0 * scale, 10.0 * scale);
    const double burst_amplitude = 10.0 * scale;

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, config.noise_sigma);
    std::uniform_int_distribution<int> picture(static_cast<int>(16 * scale),
                                               static_cast<int>(235 * scale));

    capture.samples.resize(h.expected_samples());
    std::size_t out = 0;
    for (std::size_t f = 0; f < config.frames; ++f) {
        for (std::size_t l = 0; l < config.lines_per_frame; ++l) {
            for (std::size_t i = 0; i < n; ++i, ++out) {
                if (!is_vbi[l]) {
                    capture.samples[out] = static_cast<std::uint16_t>(picture(rng));
                    continue;
                }
                const double t = static_cast<double>(out) / config.sample_rate_hz;
                double v = config.black_level;
                if (config.sync && i < sync_end) {
                    v = sync_tip;
                } else if (config.sync && i < burst_end) {
                    v += burst_amplitude * std::sin(2.0 * std::numbers::pi * kBurstHz * t);
                }
                if (config.noise_sigma > 0.0) {
                    v += noise(rng);
                }
                for (const auto& it : config.interferers) {
                    v += it.amplitude * std::sin(2.0 * std::numbers::pi * it.frequency_hz * t + it.phase_rad);
                }
                double q = std::round(v);
                if (q < 0.0 || q > top) {
                    ++result.clip_count;
                    q = std::clamp(q, 0.0, top);
                }
                capture.samples[out] = static_cast<std::uint16_t>(q);
            }
        }
    }

    result.total_samples = capture.samples.size();
    result.clip_warning = result.clip_count * 100 > result.total_samples;

    h.extra["synth.black_level"] = fmt::format("{}", config.black_level);
    h.extra["synth.noise_sigma"] = fmt::format("{}", config.noise_sigma);
    h.extra["synth.seed"] = fmt::format("{}", config.seed);
    h.extra["synth.sync"] = config.sync ? "1" : "0";
    h.extra["synth.interferers"] = format_interferers(config.interferers);
    h.extra["synth.clip_count"] = fmt::format("{}", result.clip_count);
    if (result.clip_warning) {
        h.extra["warning"] = fmt::format("clipping: {} of {} samples outside the code range",
                                         result.clip_count, result.total_samples);
    }
    return result;
}

} // namespace vbisnr
