#include <cmath>

#include <benchmark/benchmark.h>

#include "liespin/integrability.hpp"
#include "liespin/liesys.hpp"
#include "liespin/oracle.hpp"

namespace {

using namespace liespin;

FieldSpec rotating_example() { return FieldSpec(RotatingField{1.0, M_PI / 3, 0.5, 0.0}); }

void BM_ExpHermitian(benchmark::State& state) {
  const auto ops = build_spin_operators(SpinQuantumNumber(static_cast<int>(state.range(0))));
  const ComplexMatrix h = linear_combination({0.3, -0.7, 0.5}, ops);
  for (auto _ : state) benchmark::DoNotOptimize(exp_hermitian(h, 0.01));
}
BENCHMARK(BM_ExpHermitian)->Arg(1)->Arg(2)->Arg(4)->Arg(10);

void BM_FsysExponential(benchmark::State& state) {
  const Eigen::Vector3d b{0.3, -0.7, 0.5}, bp{0.0, 0.0, -0.37};
  for (auto _ : state) benchmark::DoNotOptimize(fsys_exponential(b, bp, 1e-3));
}
BENCHMARK(BM_FsysExponential);

void BM_SolveFsys(benchmark::State& state) {
  const auto b = AlgebraCurve::from_field(rotating_example());
  const auto bp = AlgebraCurve::constant({0.0, 0.0, 0.5 - std::sqrt(0.75)});
  const TimeGrid grid(0.0, 10.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fsys(b, bp, {1.0, 0.0, 0.0, 0.0}, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolveFsys)->Arg(10000);

void BM_ExactPropagator(benchmark::State& state) {
  const TimeGrid grid(0.0, 10.0, static_cast<std::size_t>(state.range(1)));
  const ExactPropagator u(rotating_example(), M_PI / 2, SpinQuantumNumber(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(u.on_grid(grid));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_ExactPropagator)->Args({1, 10000})->Args({4, 10000});

void BM_Rk4Unitary(benchmark::State& state) {
  const TimeGrid grid(0.0, 10.0, static_cast<std::size_t>(state.range(1)));
  const SpinQuantumNumber spin(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rk4_propagate_unitary(rotating_example(), spin, grid));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Rk4Unitary)->Args({1, 10000})->Args({4, 10000});

void BM_MidpointUnitary(benchmark::State& state) {
  const TimeGrid grid(0.0, 10.0, static_cast<std::size_t>(state.range(1)));
  const SpinQuantumNumber spin(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(unitary_midpoint_propagate(rotating_example(), spin, grid));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_MidpointUnitary)->Args({1, 10000})->Args({4, 10000});

void BM_CheckIntegrability(benchmark::State& state) {
  const TimeGrid grid(0.0, 10.0, 100000);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_integrability(rotating_example(), grid));
}
BENCHMARK(BM_CheckIntegrability)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
