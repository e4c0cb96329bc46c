#include <benchmark/benchmark.h>

#include "pgfluct/energy_density.hpp"
#include "pgfluct/fermi.hpp"
#include "pgfluct/kernels.hpp"
#include "pgfluct/oracle.hpp"
#include "pgfluct/quadrature.hpp"

using namespace pgfluct;

namespace {

SystemParams massive_params(double radius = 1.0) {
    SystemParams p;
    p.mass = 1.0;
    p.radius_a = radius;
    return p;
}

QuadratureConfig tol(double rel) {
    QuadratureConfig cfg;
    cfg.rel_tol = rel;
    return cfg;
}

void BM_fermi_dirac(benchmark::State& state) {
    double w = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fermi_dirac(w, 1.0));
        w += 1e-9;
    }
}
BENCHMARK(BM_fermi_dirac);

void BM_on_shell_energy(benchmark::State& state) {
    double k = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(on_shell_energy(k, 0.5));
        k += 1e-9;
    }
}
BENCHMARK(BM_on_shell_energy);

void BM_angular_moments(benchmark::State& state, double c) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(angular_moments_scaled(c, 3));
        c += 1e-12;  // stay on one branch, defeat constant folding
    }
}
BENCHMARK_CAPTURE(BM_angular_moments, taylor_branch, 0.5);
BENCHMARK_CAPTURE(BM_angular_moments, recurrence_branch, 50.0);

void BM_kernel_prepare(benchmark::State& state, PseudoGauge g) {
    const VarianceKernel kernel(g, massive_params());
    double k = 0.7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.prepare(k, 1.9));
        k += 1e-9;
    }
}
BENCHMARK_CAPTURE(BM_kernel_prepare, can, PseudoGauge::Canonical);
BENCHMARK_CAPTURE(BM_kernel_prepare, glw, PseudoGauge::GLW);
BENCHMARK_CAPTURE(BM_kernel_prepare, hw, PseudoGauge::HW);

void BM_bracket_value(benchmark::State& state, PseudoGauge g) {
    const VarianceKernel kernel(g, massive_params());
    double u = -0.999;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.bracket_value(0.8, 2.1, u));
        u += 1e-9;
    }
}
BENCHMARK_CAPTURE(BM_bracket_value, can, PseudoGauge::Canonical);
BENCHMARK_CAPTURE(BM_bracket_value, glw, PseudoGauge::GLW);
BENCHMARK_CAPTURE(BM_bracket_value, hw, PseudoGauge::HW);

void BM_energy_density(benchmark::State& state) {
    const SystemParams p = massive_params();
    const QuadratureConfig cfg = tol(1e-8);
    for (auto _ : state) benchmark::DoNotOptimize(energy_density(p, cfg));
}
BENCHMARK(BM_energy_density)->Unit(benchmark::kMicrosecond);

void BM_variance(benchmark::State& state, double radius) {
    const SystemParams p = massive_params(radius);
    const QuadratureConfig cfg = tol(1e-6);
    for (auto _ : state)
        benchmark::DoNotOptimize(variance(PseudoGauge::Canonical, p, cfg));
}
// radius 1 integrates the plain 2d region; radius 8 exercises the banded
// diagonal decomposition
BENCHMARK_CAPTURE(BM_variance, plain_region, 1.0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_variance, banded_region, 8.0)->Unit(benchmark::kMillisecond);

void BM_lattice_sum(benchmark::State& state) {
    const SystemParams p = massive_params();
    oracle::LatticeSpec spec;
    spec.box_length = 2.0;
    spec.n_max = 5;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            oracle::variance_lattice_sum(PseudoGauge::Canonical, p, spec));
}
BENCHMARK(BM_lattice_sum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
