// OpenMP kernels against their serial references, plus frame batches.

#include <benchmark/benchmark.h>

#include <vector>

#include "weldkit/deblur.hpp"
#include "weldkit/filter.hpp"
#include "weldkit/hough.hpp"
#include "weldkit/parallel.hpp"
#include "weldkit/rng.hpp"
#include "weldkit/synth.hpp"

using namespace weldkit;

namespace {

GrayImage frame(std::size_t side, std::uint64_t seed) {
    const std::vector<int> classes = {0, 2};
    const GrayImage clean = generate_scene(random_scene(side, side, 30, classes, seed, 0)).image;
    return blur_scene(clean, 30, 15, 1.0, seed);
}

void BM_Convolve(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 1);
    const Kernel k = motion_psf(30, 15);
    for (auto _ : state) benchmark::DoNotOptimize(convolve(img, k));
    state.SetItemsProcessed(state.iterations() * std::int64_t(img.size()));
}

void BM_ConvolveReference(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 1);
    const Kernel k = motion_psf(30, 15);
    for (auto _ : state) benchmark::DoNotOptimize(convolve_reference(img, k));
    state.SetItemsProcessed(state.iterations() * std::int64_t(img.size()));
}

void BM_Sobel(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(sobel_magnitude(img));
    state.SetItemsProcessed(state.iterations() * std::int64_t(img.size()));
}

void BM_SobelReference(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(sobel_magnitude_reference(img));
    state.SetItemsProcessed(state.iterations() * std::int64_t(img.size()));
}

void BM_Hough(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(hough_lines(img, {}));
}

void BM_HoughReference(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(hough_lines_reference(img, {}));
}

void BM_Wiener(benchmark::State& state) {
    const GrayImage img = frame(std::size_t(state.range(0)), 4);
    const Kernel k = motion_psf(30, 15);
    for (auto _ : state) benchmark::DoNotOptimize(wiener_deconvolve(img, k));
}

// deblur_auto over 8 frames of 1024x1024; range(0) is the worker count.
void BM_DeblurBatch(benchmark::State& state) {
    std::vector<GrayImage> frames;
    for (std::uint64_t i = 0; i < 8; ++i) frames.push_back(frame(1024, 10 + i));
    std::vector<GrayImage> out(frames.size());
    set_jobs(int(state.range(0)));
    for (auto _ : state) {
        parallel_for(frames.size(), [&](std::size_t i) { out[i] = deblur_auto(frames[i], {15, 1}).image; });
        benchmark::ClobberMemory();
    }
    set_jobs(0);
    state.SetItemsProcessed(state.iterations() * std::int64_t(frames.size()));
}

}  // namespace

BENCHMARK(BM_Convolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sobel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SobelReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hough)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HoughReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wiener)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeblurBatch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
