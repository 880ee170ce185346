#include "vbisnr/psnr.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace vbisnr {

std::string PixelPlanes::shape() const {
    return fmt::format("{}x{}x{}", width, height, channels);
}

std::string PixelPlanes::label(std::size_t channel) const {
    if (channel < labels.size()) {
        return labels[channel];
    }
    return fmt::format("c{}", channel);
}

double psnr_from_mse(double mse, int bits_per_pixel, double cap_db) {
    if (bits_per_pixel < 1 || bits_per_pixel > 16) {
        throw InvalidInput(fmt::format("bits per pixel {} outside 1..16", bits_per_pixel));
    }
    if (!(mse >= 0.0)) {
        throw InvalidInput(fmt::format("MSE must be non-negative, got {}", mse));
    }
    if (mse == 0.0) {
        return cap_db;
    }
    const double peak = std::ldexp(1.0, bits_per_pixel) - 1.0;
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

double squared_error(const std::uint16_t* a, const std::uint16_t* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
    }
    return acc;
}

} // namespace

PsnrResult psnr(const PixelPlanes& original, const PixelPlanes& decoded, int bits_per_pixel,
                double cap_db) {
    if (original.width != decoded.width || original.height != decoded.height ||
        original.channels != decoded.channels) {
        throw InvalidInput(fmt::format("image shapes differ: original {} vs decoded {}",
                                       original.shape(), decoded.shape()));
    }
    const std::size_t plane = original.plane_size();
    const std::size_t total = plane * original.channels;
    if (total == 0) {
        throw InvalidInput(fmt::format("empty image {}", original.shape()));
    }
    if (original.samples.size() != total || decoded.samples.size() != total) {
        throw InvalidInput(fmt::format("sample buffers ({} and {}) do not match shape {}",
                                       original.samples.size(), decoded.samples.size(),
                                       original.shape()));
    }

    PsnrResult result;
    result.bits_per_pixel = bits_per_pixel;
    double pooled = 0.0;
    std::vector<ChannelPsnr> channels;
    for (std::size_t c = 0; c < original.channels; ++c) {
        const double sq = squared_error(original.samples.data() + c * plane,
                                        decoded.samples.data() + c * plane, plane);
        pooled += sq;
        ChannelPsnr ch;
        ch.label = original.label(c);
        ch.mse = sq / static_cast<double>(plane);
        ch.psnr_db = psnr_from_mse(ch.mse, bits_per_pixel, cap_db);
        ch.saturated = ch.mse == 0.0;
        channels.push_back(std::move(ch));
    }
    result.mse = pooled / static_cast<double>(total);
    result.psnr_db = psnr_from_mse(result.mse, bits_per_pixel, cap_db);
    result.saturated = result.mse == 0.0;
    if (original.channels > 1) {
        result.per_channel = std::move(channels);
    }
    return result;
}

} // namespace vbisnr
