#pragma once

#include "vbisnr/line_record.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vbisnr {

enum class WindowKind { Hann, Rectangular };

struct Spectrum {
    double bin_hz = 0.0;
    /// fft_size/2 + 1 values, dB relative to the full code range 2^bits - 1.
    std::vector<double> magnitudes_db;
    WindowKind window_kind = WindowKind::Hann;
    std::size_t fft_size = 0;

    /// Strongest bin at or above first_bin; pass 1 to ignore DC.
    [[nodiscard]] std::size_t peak_bin(std::size_t first_bin = 0) const noexcept;
    [[nodiscard]] double frequency_of(std::size_t bin) const noexcept {
        return bin_hz * static_cast<double>(bin);
    }
};

/// Floor applied to dB magnitudes so empty bins stay finite.
inline constexpr double kSpectrumFloorDb = -300.0;

[[nodiscard]] bool is_power_of_two(std::size_t n) noexcept;
[[nodiscard]] std::size_t next_power_of_two(std::size_t n) noexcept;

/// One-sided |X_k|, k = 0..fft_size/2, of the zero-padded input.
/// The mean is removed before windowing and restored in bin 0 as
/// mean * count, so DC does not leak into neighbouring bins.
[[nodiscard]] std::vector<double> dft_magnitudes(std::span<const double> samples,
                                                 std::size_t fft_size, WindowKind window);

/// Magnitude spectrum of the whole line (not just the measurement window),
/// scaled so a sinusoid of amplitude A reads 20 log10(A / (2^bits - 1)).
/// fft_size defaults to the smallest power of two >= sample count.
[[nodiscard]] Spectrum line_spectrum(const LineRecord& line,
                                     std::optional<std::size_t> fft_size = std::nullopt,
                                     WindowKind window = WindowKind::Hann);

} // namespace vbisnr
