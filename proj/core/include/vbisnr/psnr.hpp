#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vbisnr {

/// Planar image: `channels` consecutive width*height planes.
struct PixelPlanes {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::vector<std::uint16_t> samples;
    /// One label per channel ("Y", "Cb", "Cr", ...). Empty means c0, c1, ...
    std::vector<std::string> labels;

    [[nodiscard]] std::size_t plane_size() const noexcept { return width * height; }
    [[nodiscard]] std::string shape() const;
    [[nodiscard]] std::string label(std::size_t channel) const;
};

struct ChannelPsnr {
    std::string label;
    double mse = 0.0;
    double psnr_db = 0.0;
    bool saturated = false;
};

struct PsnrResult {
    double mse = 0.0;
    double psnr_db = 0.0;
    int bits_per_pixel = 8;
    bool saturated = false;
    /// Populated for multi-channel input.
    std::optional<std::vector<ChannelPsnr>> per_channel;
};

/// 10 log10((2^bits - 1)^2 / mse), or cap_db when mse == 0.
[[nodiscard]] double psnr_from_mse(double mse, int bits_per_pixel, double cap_db);

/// Pooled PSNR over all pixels of all channels, plus per-channel values when
/// channels > 1. Throws InvalidInput on shape mismatch or bits outside 1..16.
[[nodiscard]] PsnrResult psnr(const PixelPlanes& original, const PixelPlanes& decoded,
                              int bits_per_pixel, double cap_db = 100.0);

} // namespace vbisnr
