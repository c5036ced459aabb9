// Benchmarks comparing the OpenMP kernels with their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "scriptrace/imaging.hpp"

namespace {

scriptrace::BinaryImage makePage(int size) {
    std::mt19937 rng(1234);
    scriptrace::BinaryImage img(size, size);
    std::uniform_int_distribution<int> pos(4, size - 5);
    for (int i = 0; i < size / 4; ++i) {
        const int r0 = pos(rng), c0 = pos(rng), r1 = pos(rng), c1 = pos(rng);
        const double len = std::hypot(r1 - r0, c1 - c0);
        const int steps = static_cast<int>(len) + 1;
        for (int s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            const int rr = static_cast<int>(r0 + t * (r1 - r0));
            const int cc = static_cast<int>(c0 + t * (c1 - c0));
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                    if (img.inBounds(rr + dr, cc + dc)) img.set(rr + dr, cc + dc, true);
        }
    }
    return img;
}

void BM_ThinSerial(benchmark::State& state) {
    const auto page = makePage(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(scriptrace::thinSerial(page));
}

void BM_ThinParallel(benchmark::State& state) {
    const auto page = makePage(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(scriptrace::thin(page));
}

void BM_DistanceTransformSerial(benchmark::State& state) {
    const auto page = makePage(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(scriptrace::distanceTransformSerial(page));
}

void BM_DistanceTransformParallel(benchmark::State& state) {
    const auto page = makePage(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(scriptrace::distanceTransform(page));
}

}  // namespace

BENCHMARK(BM_ThinSerial)->Arg(256)->Arg(512);
BENCHMARK(BM_ThinParallel)->Arg(256)->Arg(512);
BENCHMARK(BM_DistanceTransformSerial)->Arg(512)->Arg(1024);
BENCHMARK(BM_DistanceTransformParallel)->Arg(512)->Arg(1024);

BENCHMARK_MAIN();
