// Parallel kernels against their serial references. Thread count follows
// BIPOT_THREADS; on one core the comparison measures algorithmic gains only.

#include <benchmark/benchmark.h>

#include <cmath>

#include "bipot/blur.hpp"
#include "bipot/legendre.hpp"
#include "bipot/min_filter.hpp"
#include "bipot/parallel.hpp"
#include "bipot/serial.hpp"

using namespace bipot;

namespace {

SampledFunction bumpy(const Grid& g)
{
    return sample(g, [](const Point& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]) + x[0] * x[0]; });
}

ConjugatePair quad_pair(int n)
{
    const Grid g(-2.0, 2.0, n);
    return make_conjugate_pair(sample(g, [](const Point& x) { return x[0] * x[0] / 2; }), g);
}

void BM_min_filter(benchmark::State& st)
{
    const SampledFunction f = bumpy(Grid::square(-2, 2, static_cast<int>(st.range(0))));
    for (auto _ : st) {
        benchmark::DoNotOptimize(min_filter(f, 0.3));
    }
}

void BM_min_filter_serial(benchmark::State& st)
{
    const SampledFunction f = bumpy(Grid::square(-2, 2, static_cast<int>(st.range(0))));
    for (auto _ : st) {
        benchmark::DoNotOptimize(serial::min_filter(f, 0.3));
    }
}

SampledBivariate quad_sync(int n)
{
    const Grid g(-2.0, 2.0, n);
    return sample(g, g, [](const Point& x, const Point& y) { return std::max(0.0, (x[0] - y[0]) * (x[0] - y[0]) / 2); });
}

void BM_inf_convolve(benchmark::State& st)
{
    const SampledBivariate c = quad_sync(static_cast<int>(st.range(0)));
    const BlurSpec spec{st.range(1) ? BlurSpec::Kind::Product : BlurSpec::Kind::YBall, 0.2, 2.0};
    for (auto _ : st) {
        benchmark::DoNotOptimize(inf_convolve_blur(c, spec));
    }
}

void BM_inf_convolve_serial(benchmark::State& st)
{
    const SampledBivariate c = quad_sync(static_cast<int>(st.range(0)));
    const BlurSpec spec{st.range(1) ? BlurSpec::Kind::Product : BlurSpec::Kind::YBall, 0.2, 2.0};
    for (auto _ : st) {
        benchmark::DoNotOptimize(serial::inf_convolve_blur(c, spec));
    }
}

void BM_blurred_bipotential(benchmark::State& st)
{
    const ConjugatePair pair = quad_pair(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(blurred_bipotential(pair, 0.5));
    }
}

void BM_blurred_bipotential_serial(benchmark::State& st)
{
    const ConjugatePair pair = quad_pair(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(serial::blurred_bipotential(pair, 0.5));
    }
}

void BM_conjugate(benchmark::State& st)
{
    const SampledFunction f = bumpy(Grid::square(-2, 2, static_cast<int>(st.range(0))));
    for (auto _ : st) {
        benchmark::DoNotOptimize(conjugate(f, f.grid));
    }
}

void BM_conjugate_bruteforce(benchmark::State& st)
{
    const SampledFunction f = bumpy(Grid::square(-2, 2, static_cast<int>(st.range(0))));
    for (auto _ : st) {
        benchmark::DoNotOptimize(conjugate_bruteforce(f, f.grid));
    }
}

} // namespace

BENCHMARK(BM_min_filter)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_min_filter_serial)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_inf_convolve)->Args({201, 0})->Args({201, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_inf_convolve_serial)->Args({201, 0})->Args({201, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_blurred_bipotential)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_blurred_bipotential_serial)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_conjugate)->Arg(31)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_conjugate_bruteforce)->Arg(31)->Arg(61)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv)
{
    apply_thread_env();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
