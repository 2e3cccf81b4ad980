// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "liouspec/eigensolver.hpp"
#include "liouspec/feshbach.hpp"
#include "liouspec/fockspace.hpp"
#include "liouspec/levelshift.hpp"
#include "liouspec/spectra.hpp"

using namespace liouspec;

namespace {

CMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(d(rng), d(rng));
  return a;
}

// dense eigensolver against matrix size
void BM_DenseEigenvalues(benchmark::State& state) {
  const CMatrix a = random_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_dense(a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseEigenvalues)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_ComplexSchur(benchmark::State& state) {
  const CMatrix a = random_matrix(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(complex_schur(a));
}
BENCHMARK(BM_ComplexSchur)->Arg(64)->Arg(128);

// Fock space assembly of K_theta, arg = signed nodes, n_max = 2
void BM_AssembleK(benchmark::State& state) {
  const GluedGrid grid = make_grid(GridSpec{3.5, static_cast<int>(state.range(0)), 1.0, 0});
  const FockBasis basis(grid.mode_count(), 2);
  const ParticleModel m = two_level_benchmark();
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_K(grid, basis, th, 0.01, m));
  state.counters["dimension"] = static_cast<double>(basis.dimension() * 4);
}
BENCHMARK(BM_AssembleK)->Arg(12)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_BlockedSpectrum(benchmark::State& state) {
  const GluedGrid grid = make_grid(GridSpec{3.5, static_cast<int>(state.range(0)), 1.0, 0});
  const FockBasis basis(grid.mode_count(), 2);
  const FockOperator k = assemble_K(grid, basis, Deformation::imaginary(0.3, 0.05), 0.01, two_level_benchmark());
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_blocked(k.matrix));
  state.counters["dimension"] = k.dimension();
}
BENCHMARK(BM_BlockedSpectrum)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_LevelShiftPV(benchmark::State& state) {
  const ParticleModel m = two_level_benchmark();
  for (auto _ : state) benchmark::DoNotOptimize(level_shift_pv_delta(m, 0.0));
}
BENCHMARK(BM_LevelShiftPV)->Unit(benchmark::kMillisecond);

void BM_LevelShiftDeformed(benchmark::State& state) {
  const ParticleModel m = two_level_benchmark();
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(level_shift_deformed(m, 0.0, th));
}
BENCHMARK(BM_LevelShiftDeformed)->Unit(benchmark::kMillisecond);

void BM_LocateResonance(benchmark::State& state) {
  const ResonanceSetup s = make_resonance_setup(two_level_benchmark(), make_grid(GridSpec{}), 1,
                                                Deformation::imaginary(0.3, 0.05), 1.0);
  const LevelShiftResult ls = grid_level_shift(s, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(locate_resonance(s, 0.0, 0.01, ls));
}
BENCHMARK(BM_LocateResonance)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
