#include "vbisnr/capture.hpp"
#include "vbisnr/filter.hpp"
#include "vbisnr/measure.hpp"
#include "vbisnr/spectrum.hpp"
#include "vbisnr/synth.hpp"

#include <benchmark/benchmark.h>

using namespace vbisnr;

namespace {

CaptureFile noisy_capture() {
    SynthConfig cfg;
    cfg.noise_sigma = 2.19;
    cfg.interferers = {Interferer{kSoundCarrierOffsetHz, 10.0, 0.0}};
    return synthesize(cfg).capture;
}

void BM_MeasureLine(benchmark::State& state) {
    const auto lines = extract_vbi_lines(noisy_capture());
    MeasureConfig cfg;
    if (state.range(0)) cfg.filter = FilterSpec{};
    for (auto _ : state) benchmark::DoNotOptimize(measure_line(lines.front(), cfg));
}
BENCHMARK(BM_MeasureLine)->Arg(0)->Arg(1);

void BM_Accumulate30Frames(benchmark::State& state) {
    const auto lines = extract_vbi_lines(noisy_capture());
    MeasureConfig cfg;
    if (state.range(0)) cfg.filter = FilterSpec{};
    for (auto _ : state) benchmark::DoNotOptimize(accumulate(lines, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lines.size()));
}
BENCHMARK(BM_Accumulate30Frames)->Arg(0)->Arg(1);

void BM_DesignLowpass(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(design_lowpass(FilterSpec{}, kDefaultSampleRateHz));
}
BENCHMARK(BM_DesignLowpass);

void BM_ApplyFilter(benchmark::State& state) {
    const auto taps = design_lowpass(FilterSpec{}, kDefaultSampleRateHz);
    std::vector<double> x(static_cast<std::size_t>(state.range(0)), 60.0);
    for (auto _ : state) benchmark::DoNotOptimize(apply_filter(x, taps));
}
BENCHMARK(BM_ApplyFilter)->Arg(743)->Arg(8192);

void BM_LineSpectrum(benchmark::State& state) {
    const auto lines = extract_vbi_lines(noisy_capture());
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(line_spectrum(lines.front(), n));
}
BENCHMARK(BM_LineSpectrum)->Arg(1024)->Arg(8192);

void BM_Synthesize(benchmark::State& state) {
    SynthConfig cfg;
    cfg.noise_sigma = 2.19;
    cfg.sync = true;
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(cfg));
}
BENCHMARK(BM_Synthesize);

} // namespace

BENCHMARK_MAIN();
