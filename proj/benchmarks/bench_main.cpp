// Microbenchmarks for the heavy numerical kernels: operator assembly,
// extreme-eigenvalue extraction, and the end-to-end temperature solve.

#include <benchmark/benchmark.h>

#include "bcslab/critical_temp.hpp"
#include "bcslab/grids.hpp"
#include "bcslab/kernels.hpp"
#include "bcslab/potential.hpp"
#include "bcslab/spectral.hpp"

namespace {

bcslab::GridSpec spec_for(int n) {
  bcslab::GridSpec spec;
  spec.n_radial = n;
  return spec;
}

void bench_assemble_bs_zero(benchmark::State& state) {
  const auto pot = bcslab::Potential::square_well(1.0, 1.0);
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const auto grid = spec.radial(pot);
  for (auto _ : state) {
    auto km = bcslab::assemble_bs_zero_sym(pot, grid);
    benchmark::DoNotOptimize(km.m.data());
  }
  state.SetComplexityN(state.range(0));
}

void bench_assemble_bt(benchmark::State& state) {
  const auto pot = bcslab::Potential::square_well(1.0, 1.0);
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const auto grid = spec.radial(pot);
  const double mu = 0.1;
  const double T = 1e-5;
  const auto pg = bcslab::make_momentum_grid(T, mu, 2.0 * grid.r_max, spec.bt);
  for (auto _ : state) {
    auto km = bcslab::assemble_bt(pot, grid, pg, spec.tail_tol);
    benchmark::DoNotOptimize(km.m.data());
  }
  state.SetComplexityN(state.range(0));
}

void bench_min_eig(benchmark::State& state) {
  const auto pot = bcslab::Potential::square_well(1.0, 1.0);
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const auto grid = spec.radial(pot);
  const auto pg = bcslab::make_momentum_grid(1e-5, 0.1, 2.0 * grid.r_max, spec.bt);
  const auto km = bcslab::assemble_bt(pot, grid, pg, spec.tail_tol);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcslab::min_eig_value(km));
  }
  state.SetComplexityN(state.range(0));
}

void bench_tc_solve(benchmark::State& state) {
  const auto pot = bcslab::Potential::square_well(1.0, 1.0);
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = bcslab::tc_solve(pot, 0.1, spec);
    benchmark::DoNotOptimize(r.tc);
  }
}

}  // namespace

BENCHMARK(bench_assemble_bs_zero)->Arg(128)->Arg(256)->Arg(384)->Complexity();
BENCHMARK(bench_assemble_bt)->Arg(128)->Arg(256)->Arg(384)->Complexity();
BENCHMARK(bench_min_eig)->Arg(128)->Arg(256)->Arg(384)->Complexity();
BENCHMARK(bench_tc_solve)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
