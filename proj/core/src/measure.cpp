#include "vbisnr/measure.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace vbisnr {

double default_full_scale(int bit_depth) {
    if (bit_depth < kMinBitDepth || bit_depth > 16) {
        throw InvalidInput(fmt::format("no default full scale for bit depth {}", bit_depth));
    }
    return kFullScale8Bit * std::ldexp(1.0, bit_depth - 8);
}

double MeasureConfig::full_scale_for(int bit_depth) const {
    if (full_scale) {
        if (!(*full_scale > 0.0) || !std::isfinite(*full_scale)) {
            throw InvalidInput(fmt::format("full scale must be positive, got {}", *full_scale));
        }
        return *full_scale;
    }
    return default_full_scale(bit_depth);
}

double Measurement::error_margin_db() const noexcept {
    if (!(v_n > 0.0)) {
        return 0.0;
    }
    return 20.0 / std::numbers::ln10 * error_margin / v_n;
}

double estimate_reference_level(const LineRecord& line) {
    line.validate();
    const auto window = line.windowed();
    const std::uint64_t sum = std::accumulate(window.begin(), window.end(), std::uint64_t{0});
    return static_cast<double>(sum) / static_cast<double>(window.size());
}

namespace {

template <typename Range>
double sum_squared_deviation(const Range& values, double v_ref) {
    double acc = 0.0;
    for (const auto x : values) {
        const double d = static_cast<double>(x) - v_ref;
        acc += d * d;
    }
    return acc;
}

void require_finite_ref(double v_ref) {
    if (!std::isfinite(v_ref)) {
        throw InvalidInput("reference level must be finite");
    }
}

} // namespace

double noise_rms(const LineRecord& line, double v_ref) {
    line.validate();
    require_finite_ref(v_ref);
    const auto window = line.windowed();
    return std::sqrt(sum_squared_deviation(window, v_ref) /
                     static_cast<double>(window.size() - 1));
}

double noise_rms(std::span<const double> samples, double v_ref) {
    if (samples.size() < 2) {
        throw InvalidInput(fmt::format("noise RMS needs at least 2 samples, got {}", samples.size()));
    }
    require_finite_ref(v_ref);
    return std::sqrt(sum_squared_deviation(samples, v_ref) /
                     static_cast<double>(samples.size() - 1));
}

SnrValue snr_db(double v_n, double full_scale, double snr_cap_db) {
    if (!(v_n >= 0.0) || !std::isfinite(v_n)) {
        throw InvalidInput(fmt::format("noise RMS must be finite and non-negative, got {}", v_n));
    }
    if (!(full_scale > 0.0) || !std::isfinite(full_scale)) {
        throw InvalidInput(fmt::format("full scale must be positive, got {}", full_scale));
    }
    if (v_n == 0.0) {
        return {snr_cap_db, true};
    }
    return {20.0 * std::log10(full_scale / v_n), false};
}

SnrValue snr_db(double v_n, const MeasureConfig& config, int bit_depth) {
    return snr_db(v_n, config.full_scale_for(bit_depth), config.snr_cap_db);
}

double error_margin(double v_n, std::size_t n_samples) {
    if (n_samples == 0) {
        throw InvalidInput("error margin needs at least one sample");
    }
    if (!(v_n >= 0.0)) {
        throw InvalidInput(fmt::format("noise RMS must be non-negative, got {}", v_n));
    }
    return v_n / std::sqrt(static_cast<double>(n_samples));
}

namespace {

// Canonical pooling order so floating-point sums do not depend on input order.
std::vector<const LineRecord*> canonical_order(std::span<const LineRecord> lines) {
    std::vector<const LineRecord*> order;
    order.reserve(lines.size());
    for (const auto& line : lines) {
        order.push_back(&line);
    }
    std::sort(order.begin(), order.end(), [](const LineRecord* a, const LineRecord* b) {
        if (a->frame_index != b->frame_index) return a->frame_index < b->frame_index;
        if (a->line_index != b->line_index) return a->line_index < b->line_index;
        const auto wa = a->windowed();
        const auto wb = b->windowed();
        return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
    });
    return order;
}

void check_population(std::span<const LineRecord> lines, const MeasureConfig& config) {
    if (lines.empty()) {
        throw InvalidInput("accumulation needs at least one line");
    }
    const auto& first = lines.front();
    std::set<std::size_t> frames;
    for (const auto& line : lines) {
        line.validate();
        if (line.bit_depth != first.bit_depth) {
            throw InvalidInput(fmt::format("{}: bit depth {} differs from {}", line.describe(),
                                           line.bit_depth, first.bit_depth));
        }
        if (line.sample_rate_hz != first.sample_rate_hz) {
            throw InvalidInput(fmt::format("{}: sample rate {} Hz differs from {} Hz",
                                           line.describe(), line.sample_rate_hz,
                                           first.sample_rate_hz));
        }
        frames.insert(line.frame_index);
    }
    if (config.max_frames == 0) {
        throw InvalidInput("max_frames must be positive");
    }
    if (frames.size() > config.max_frames) {
        throw InvalidInput(fmt::format("{} frames supplied; accumulation is limited to {} frames",
                                       frames.size(), config.max_frames));
    }
}

} // namespace

Measurement accumulate(std::span<const LineRecord> lines, const MeasureConfig& config) {
    check_population(lines, config);
    const auto order = canonical_order(lines);
    const int bit_depth = lines.front().bit_depth;
    const double sample_rate = lines.front().sample_rate_hz;

    std::uint64_t sum = 0;
    std::size_t count = 0;
    for (const auto* line : order) {
        const auto w = line->windowed();
        sum = std::accumulate(w.begin(), w.end(), sum);
        count += w.size();
    }
    std::set<std::size_t> frames;
    for (const auto& line : lines) {
        frames.insert(line.frame_index);
    }

    Measurement m;
    m.v_ref = static_cast<double>(sum) / static_cast<double>(count);
    m.frames_used = frames.size();

    double squared = 0.0;
    for (const auto* line : order) {
        squared += sum_squared_deviation(line->windowed(), m.v_ref);
    }

    if (!config.filter) {
        m.n_samples = count;
        m.v_n = std::sqrt(squared / static_cast<double>(count - 1));
    } else {
        const auto taps = design_lowpass(*config.filter, sample_rate);
        m.filtered = true;
        m.noise_gain = taps.noise_gain();
        double filtered_squared = 0.0;
        std::size_t filtered_count = 0;
        std::vector<double> buffer;
        for (const auto* line : order) {
            const auto w = line->windowed();
            if (w.size() <= taps.size()) {
                throw InvalidInput(fmt::format(
                    "{}: window of {} samples is too short for a {}-tap filter", line->describe(),
                    w.size(), taps.size()));
            }
            buffer.assign(w.begin(), w.end());
            const auto y = apply_filter(buffer, taps);
            filtered_squared += sum_squared_deviation(y, m.v_ref);
            filtered_count += y.size();
        }
        if (filtered_count < 2) {
            throw InvalidInput("filtered population has fewer than 2 samples");
        }
        m.n_samples = filtered_count;
        // A constant population stays constant through a unity-gain filter;
        // keep it exactly zero rather than rounding residue.
        m.v_n = squared == 0.0
                    ? 0.0
                    : std::sqrt(filtered_squared / static_cast<double>(filtered_count - 1) /
                                m.noise_gain);
    }

    const auto snr = snr_db(m.v_n, config, bit_depth);
    m.snr_db = snr.snr_db;
    m.saturated = snr.saturated;
    m.error_margin = error_margin(m.v_n, m.n_samples);
    return m;
}

Measurement measure_line(const LineRecord& line, const MeasureConfig& config) {
    return accumulate(std::span<const LineRecord>(&line, 1), config);
}

} // namespace vbisnr
