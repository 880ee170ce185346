#pragma once

// Test-only reference computations. These deliberately avoid the library's
// code paths: plain loops over the textbook formulas.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Two-pass sample standard deviation, N-1 denominator.
inline double two_pass_stddev(const std::vector<double>& x) {
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(x.size());
    long double ss = 0.0L;
    for (double v : x) ss += (v - mean) * (v - mean);
    return static_cast<double>(std::sqrt(ss / static_cast<long double>(x.size() - 1)));
}

inline double mean(const std::vector<double>& x) {
    long double s = 0.0L;
    for (double v : x) s += v;
    return static_cast<double>(s / static_cast<long double>(x.size()));
}

/// |sum_k h[k] e^{-j w k}| in dB, evaluated with separate cos/sin sums.
inline double response_db(const std::vector<double>& taps, double f, double fs) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        const double a = 2.0 * std::numbers::pi * f / fs * static_cast<double>(k);
        re += taps[k] * std::cos(a);
        im -= taps[k] * std::sin(a);
    }
    return 10.0 * std::log10(re * re + im * im);
}

/// Direct DFT magnitude of the zero-padded sequence at bin k.
inline double dft_magnitude(const std::vector<double>& x, std::size_t fft_size, std::size_t k) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k * n % fft_size) /
                         static_cast<double>(fft_size);
        re += x[n] * std::cos(a);
        im -= x[n] * std::sin(a);
    }
    return std::hypot(re, im);
}

/// Full-length convolution sliced to the valid region, written independently.
inline std::vector<double> valid_convolution(const std::vector<double>& x, const std::vector<double>& h) {
    std::vector<double> y;
    for (std::size_t n = h.size() - 1; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) acc += h[k] * x[n - k];
        y.push_back(acc);
    }
    return y;
}

inline double rms(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

/// Quantized Gaussian samples around `level`, generated independently of the synthesizer.
inline std::vector<std::uint16_t> gaussian_codes(std::size_t n, double level, double sigma,
                                                 std::uint32_t seed, double tone_hz = 0.0,
                                                 double tone_amplitude = 0.0, double fs = 13.5e6) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<std::uint16_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = level + noise(rng) +
                   tone_amplitude * std::sin(2.0 * std::numbers::pi * tone_hz * static_cast<double>(i) / fs);
        v = std::round(v);
        out[i] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 255.0));
    }
    return out;
}

inline std::vector<double> to_double(const std::vector<std::uint16_t>& v) {
    return {v.begin(), v.end()};
}

} // namespace oracle

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("vbisnr-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};
