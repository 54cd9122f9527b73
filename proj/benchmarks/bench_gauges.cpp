#include <benchmark/benchmark.h>

#include "polarproj/asymptotics.hpp"
#include "polarproj/bodies.hpp"
#include "polarproj/gauges.hpp"

using namespace polarproj;

namespace {

const Vec e1{1.0, 0.0};

void BM_LpGauge(benchmark::State& st) {
    const auto f = ScalarField::cone(2, 1.0);
    const QuadConfig cfg;
    for (auto _ : st) benchmark::DoNotOptimize(gauge(f, GaugeKind::lp(static_cast<double>(st.range(0))), e1, cfg));
}
BENCHMARK(BM_LpGauge)->Arg(2)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FracLpGauge(benchmark::State& st) {
    const auto f = ScalarField::cone(2, 1.0);
    const QuadConfig cfg;
    for (auto _ : st)
        benchmark::DoNotOptimize(gauge(f, GaugeKind::frac_lp(0.8, static_cast<double>(st.range(0))), e1, cfg));
}
BENCHMARK(BM_FracLpGauge)->Arg(2)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_FracLInfGauge(benchmark::State& st) {
    const auto f = ScalarField::tensor_tent(Vec{1.0, 1.0});
    const QuadConfig cfg;
    const Vec u = normalized(Vec{1.0, 0.4});
    for (auto _ : st) benchmark::DoNotOptimize(gauge(f, GaugeKind::frac_linf(0.7), u, cfg));
}
BENCHMARK(BM_FracLInfGauge)->Unit(benchmark::kMillisecond);

void BM_DualMixedVolume(benchmark::State& st) {
    const SphereGrid g = make_sphere_grid(2, 720);
    const StarBody K = StarBody::random_fourier(1), L = StarBody::random_fourier(2);
    for (auto _ : st) benchmark::DoNotOptimize(dual_mixed_volume(K, L, -static_cast<double>(st.range(0)), g));
}
BENCHMARK(BM_DualMixedVolume)->Arg(2)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_RealizeAnisoBody(benchmark::State& st) {
    const auto f = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    auto g = std::make_shared<const SphereGrid>(make_sphere_grid(2, 720));
    const QuadConfig cfg;
    for (auto _ : st) benchmark::DoNotOptimize(realize_body(f, GaugeKind::frac_lp(0.9, 32.0), g, cfg));
}
BENCHMARK(BM_RealizeAnisoBody)->Unit(benchmark::kMillisecond);

void BM_HolderQuotient(benchmark::State& st) {
    const auto f = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    const StarBody B = StarBody::ball(2);
    QuadConfig cfg;
    cfg.x_cells_per_axis = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(holder_quotient_sup(f, B, 0.7, cfg));
}
BENCHMARK(BM_HolderQuotient)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
