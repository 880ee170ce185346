#include "vbisnr/spectrum.hpp"

#include "vbisnr/error.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace vbisnr {

namespace {

// FFTW planning is not thread safe; execution with distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

std::vector<double> window_coefficients(std::size_t n, WindowKind kind) {
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::Hann && n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                        static_cast<double>(n - 1));
        }
    }
    return w;
}

} // namespace

bool is_power_of_two(std::size_t n) noexcept {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

std::size_t Spectrum::peak_bin(std::size_t first_bin) const noexcept {
    if (first_bin >= magnitudes_db.size()) {
        return 0;
    }
    const auto from = magnitudes_db.begin() + static_cast<std::ptrdiff_t>(first_bin);
    return static_cast<std::size_t>(
        std::distance(magnitudes_db.begin(), std::max_element(from, magnitudes_db.end())));
}

std::vector<double> dft_magnitudes(std::span<const double> samples, std::size_t fft_size,
                                   WindowKind window) {
    if (!is_power_of_two(fft_size)) {
        throw InvalidInput(fmt::format("FFT size {} is not a power of two", fft_size));
    }
    if (samples.empty() || fft_size < samples.size()) {
        throw InvalidInput(fmt::format("FFT size {} must be >= sample count {} (and non-zero input)",
                                       fft_size, samples.size()));
    }
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                        static_cast<double>(samples.size());
    const auto w = window_coefficients(samples.size(), window);

    const std::size_t bins = fft_size / 2 + 1;
    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * fft_size)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
    if (!in || !out) {
        throw std::bad_alloc();
    }
    std::fill_n(in.get(), fft_size, 0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        in.get()[i] = (samples[i] - mean) * w[i];
    }

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(fft_size), in.get(), out.get(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> mags(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        mags[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
    }
    // The windowed AC part sums to ~0 at DC; restore the unwindowed DC term.
    mags[0] = std::abs(mean) * static_cast<double>(samples.size());
    return mags;
}

Spectrum line_spectrum(const LineRecord& line, std::optional<std::size_t> fft_size,
                       WindowKind window) {
    if (line.samples.empty()) {
        throw InvalidInput(fmt::format("{}: empty line", line.describe()));
    }
    if (!(line.sample_rate_hz > 0.0)) {
        throw InvalidInput(fmt::format("{}: sample rate must be positive", line.describe()));
    }
    const std::size_t n = line.samples.size();
    const std::size_t size = fft_size.value_or(next_power_of_two(n));
    if (!is_power_of_two(size)) {
        throw InvalidInput(fmt::format("FFT size {} is not a power of two", size));
    }
    if (size < n) {
        throw InvalidInput(fmt::format("FFT size {} is smaller than the {} line samples", size, n));
    }

    std::vector<double> x(line.samples.begin(), line.samples.end());
    const auto mags = dft_magnitudes(x, size, window);

    const auto w = window_coefficients(n, window);
    const double coherent = std::accumulate(w.begin(), w.end(), 0.0);
    const double full_scale = std::ldexp(1.0, line.bit_depth) - 1.0;

    Spectrum s;
    s.bin_hz = line.sample_rate_hz / static_cast<double>(size);
    s.window_kind = window;
    s.fft_size = size;
    s.magnitudes_db.resize(mags.size());
    for (std::size_t k = 0; k < mags.size(); ++k) {
        const bool edge = k == 0 || k == size / 2;
        const double amplitude = k == 0 ? mags[k] / static_cast<double>(n)
                                        : (edge ? 1.0 : 2.0) * mags[k] / coherent;
        const double db = amplitude > 0.0 ? 20.0 * std::log10(amplitude / full_scale) : kSpectrumFloorDb;
        s.magnitudes_db[k] = std::max(db, kSpectrumFloorDb);
    }
    return s;
}

} // namespace vbisnr
