// Benchmarks the enumeration kernels: serial reference vs OpenMP-parallel,
// on the UVL configuration side and the IVML assignment-count side.
//
//   ./build/bench/bench_enumeration [--benchmark_filter=...]

#include "support/model_gen.hpp"
#include "uvl2ivml/oracle/oracle.hpp"
#include "uvl2ivml/transform/transform.hpp"

#include <benchmark/benchmark.h>

using namespace uvl2ivml;
using oracle::Exec;

namespace {

void bench_uvl_enumeration(benchmark::State& state, Exec exec) {
    int or_children = static_cast<int>(state.range(0));
    int optionals = static_cast<int>(state.range(1));
    uvl::UvlModel model = testing::wide_model(or_children, optionals);
    uint64_t count = 0;
    for (auto _ : state) {
        auto configs = oracle::enumerate_uvl_configurations(model, 30, exec);
        count = configs.size();
        benchmark::DoNotOptimize(count);
    }
    state.counters["valid"] = static_cast<double>(count);
    state.counters["candidates"] =
        static_cast<double>(uint64_t{1} << (or_children + optionals));
}

void bench_ivml_count(benchmark::State& state, Exec exec) {
    int or_children = static_cast<int>(state.range(0));
    int optionals = static_cast<int>(state.range(1));
    uvl::UvlModel model = testing::wide_model(or_children, optionals);
    TransformOptions opts;
    opts.mode = TransformMode::strict;
    TransformResult result = transform(model, opts);
    auto space = oracle::IvmlSpace::build(result.project);
    uint64_t count = 0;
    for (auto _ : state) {
        count = oracle::count_valid_ivml_assignments(*space, 30, exec);
        benchmark::DoNotOptimize(count);
    }
    state.counters["valid"] = static_cast<double>(count);
    state.counters["candidates"] = static_cast<double>(space->total);
}

void uvl_serial(benchmark::State& s) { bench_uvl_enumeration(s, Exec::serial); }
void uvl_parallel(benchmark::State& s) { bench_uvl_enumeration(s, Exec::parallel); }
void ivml_serial(benchmark::State& s) { bench_ivml_count(s, Exec::serial); }
void ivml_parallel(benchmark::State& s) { bench_ivml_count(s, Exec::parallel); }

} // namespace

BENCHMARK(uvl_serial)->Args({12, 8})->Args({14, 8})->Args({14, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(uvl_parallel)->Args({12, 8})->Args({14, 8})->Args({14, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(ivml_serial)->Args({12, 8})->Args({14, 8})->Args({14, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(ivml_parallel)->Args({12, 8})->Args({14, 8})->Args({14, 10})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
