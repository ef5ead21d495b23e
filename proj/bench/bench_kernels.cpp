// OpenMP kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "splicegen/kernels.hpp"

namespace k = splicegen::kernels;
namespace ref = splicegen::kernels::reference;

namespace {

std::vector<double> noise(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

std::vector<std::uint8_t> blobs(int w, int h) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m[static_cast<std::size_t>(y) * w + x] = ((x / 37 + y / 23) % 3) == 0;
    return m;
}

// Interior grid of side n: every pixel is an unknown.
k::StencilNeighbours grid(int n) {
    k::StencilNeighbours nb(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            nb[static_cast<std::size_t>(y) * n + x] = {x > 0 ? y * n + x - 1 : -1, x + 1 < n ? y * n + x + 1 : -1,
                                                       y > 0 ? (y - 1) * n + x : -1,
                                                       y + 1 < n ? (y + 1) * n + x : -1};
    return nb;
}

const std::vector<double> kTaps = {1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0};

template <bool Parallel>
void BM_ConvolveRows(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto src = noise(static_cast<std::size_t>(n) * n * 3, 1);
    std::vector<double> dst(src.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::convolve_rows(src, dst, n, n, 3, kTaps);
        else ref::convolve_rows(src, dst, n, n, 3, kTaps);
        benchmark::DoNotOptimize(dst.data());
    }
    st.SetItemsProcessed(st.iterations() * n * n);
}

template <bool Parallel>
void BM_ConvolveCols(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto src = noise(static_cast<std::size_t>(n) * n * 3, 2);
    std::vector<double> dst(src.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::convolve_cols(src, dst, n, n, 3, kTaps);
        else ref::convolve_cols(src, dst, n, n, 3, kTaps);
        benchmark::DoNotOptimize(dst.data());
    }
    st.SetItemsProcessed(st.iterations() * n * n);
}

template <bool Parallel>
void BM_BoxMean(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto src = noise(static_cast<std::size_t>(n) * n, 3);
    std::vector<double> dst(src.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::box_mean(src, dst, n, n, 8);
        else ref::box_mean(src, dst, n, n, 8);
        benchmark::DoNotOptimize(dst.data());
    }
    st.SetItemsProcessed(st.iterations() * n * n);
}

template <bool Parallel>
void BM_Erode(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto src = blobs(n, n);
    std::vector<std::uint8_t> dst(src.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::erode_binary(src, dst, n, n, 3);
        else ref::erode_binary(src, dst, n, n, 3);
        benchmark::DoNotOptimize(dst.data());
    }
    st.SetItemsProcessed(st.iterations() * n * n);
}

template <bool Parallel>
void BM_Stencil(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto nb = grid(n);
    const auto x = noise(nb.size(), 4);
    std::vector<double> y(nb.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::stencil_apply(nb, x, y);
        else ref::stencil_apply(nb, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(nb.size()));
}

template <bool Parallel>
void BM_Dot(benchmark::State& st) {
    const std::size_t n = static_cast<std::size_t>(st.range(0)) * st.range(0);
    const auto a = noise(n, 5), b = noise(n, 6);
    for (auto _ : st) {
        double d;
        if constexpr (Parallel) d = k::dot(a, b);
        else d = ref::dot(a, b);
        benchmark::DoNotOptimize(d);
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(n));
}

}  // namespace

#define SIZES ->Arg(256)->Arg(1024)

BENCHMARK(BM_ConvolveRows<true>) SIZES;
BENCHMARK(BM_ConvolveRows<false>) SIZES;
BENCHMARK(BM_ConvolveCols<true>) SIZES;
BENCHMARK(BM_ConvolveCols<false>) SIZES;
BENCHMARK(BM_BoxMean<true>) SIZES;
BENCHMARK(BM_BoxMean<false>) SIZES;
BENCHMARK(BM_Erode<true>) SIZES;
BENCHMARK(BM_Erode<false>) SIZES;
BENCHMARK(BM_Stencil<true>) SIZES;
BENCHMARK(BM_Stencil<false>) SIZES;
BENCHMARK(BM_Dot<true>) SIZES;
BENCHMARK(BM_Dot<false>) SIZES;

BENCHMARK_MAIN();
