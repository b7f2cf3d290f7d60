// Microbenchmarks for the pipeline's hot paths. Inputs are the bundled
// physics (coherent + single photon mixed at tau = 0.3) so the measured
// shapes match what the scenarios actually run: dense Hermitian operators
// whose dimension is set by the cutoff, evaluated over a phase-space lattice.

#include <benchmark/benchmark.h>

#include <complex>

#include "wigmix/currents.hpp"
#include "wigmix/flowlines.hpp"
#include "wigmix/fock.hpp"
#include "wigmix/wigner.hpp"

namespace {

using namespace wigmix;

PhaseSpaceGrid bench_grid(int n = 121) {
  PhaseSpaceGrid g;
  g.nx = n;
  g.np = n;
  return g;  // default [-6,6]^2 window
}

TwoModeAmplitudes mixed_state(int cutoff) {
  const FockVector a =
      make_coherent(complexd(1.0, 1.0), Cutoff{cutoff});
  const FockVector b = make_fock(1, Cutoff{cutoff});
  return apply_beam_splitter(product_state(a, b), MixerParameter{0.3});
}

void BM_kernel_point(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(n, n / 2, 1.1, -0.7));
  }
}
BENCHMARK(BM_kernel_point)->Arg(4)->Arg(16)->Arg(64);

void BM_kernel_table_build(benchmark::State& state) {
  const PhaseSpaceGrid grid = bench_grid();
  const Cutoff cutoff{static_cast<int>(state.range(0))};
  for (auto _ : state) {
    WignerKernelTable table(grid, cutoff);
    benchmark::DoNotOptimize(table.memory_bytes());
  }
}
BENCHMARK(BM_kernel_table_build)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_weyl_field(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const PhaseSpaceGrid grid = bench_grid();
  const DensityOperator rho = reduce(mixed_state(cutoff), Mode::b);
  for (auto _ : state) {
    const ScalarField w = weyl_field(rho, grid);
    benchmark::DoNotOptimize(w.values.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_weyl_field)->Arg(15)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

// The current assembly evaluates three operators per mode; the batched
// evaluator shares the ladder recurrences between them, which is what this
// measures against three separate weyl_field sweeps.
void BM_weyl_fields_batched(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const PhaseSpaceGrid grid = bench_grid();
  const TwoModeAmplitudes psi = mixed_state(cutoff);
  const std::vector<DensityOperator> ops{
      reduce(psi, Mode::b), traced_moment(psi, Mode::a, QuadratureAxis::x),
      traced_moment(psi, Mode::a, QuadratureAxis::p)};
  const std::vector<FieldMeaning> meanings{FieldMeaning::wigner_distribution,
                                           FieldMeaning::weyl_symbol,
                                           FieldMeaning::weyl_symbol};
  for (auto _ : state) {
    const auto fields = weyl_fields(ops, grid, meanings);
    benchmark::DoNotOptimize(fields.front().values.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(3 * grid.size()));
}
BENCHMARK(BM_weyl_fields_batched)
    ->Arg(15)
    ->Arg(30)
    ->Arg(60)
    ->Unit(benchmark::kMillisecond);

void BM_beam_splitter_plan_build(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BeamSplitterPlan plan(dim);
    benchmark::DoNotOptimize(plan.dim());
  }
}
BENCHMARK(BM_beam_splitter_plan_build)
    ->Arg(16)
    ->Arg(61)
    ->Arg(121)
    ->Unit(benchmark::kMillisecond);

void BM_beam_splitter_plan_apply(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const TwoModeAmplitudes psi = mixed_state(cutoff);
  const BeamSplitterPlan plan(psi.dim_a());
  for (auto _ : state) {
    const TwoModeAmplitudes out = plan.apply(psi, MixerParameter{0.61});
    benchmark::DoNotOptimize(out.c.data());
  }
}
BENCHMARK(BM_beam_splitter_plan_apply)
    ->Arg(15)
    ->Arg(30)
    ->Arg(60)
    ->Unit(benchmark::kMicrosecond);

void BM_beam_splitter_streaming(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const TwoModeAmplitudes psi0 = product_state(
      make_coherent(complexd(1.0, 1.0), Cutoff{cutoff}),
      make_fock(1, Cutoff{cutoff}));
  for (auto _ : state) {
    const TwoModeAmplitudes out =
        apply_beam_splitter(psi0, MixerParameter{0.61});
    benchmark::DoNotOptimize(out.c.data());
  }
}
BENCHMARK(BM_beam_splitter_streaming)
    ->Arg(15)
    ->Arg(30)
    ->Arg(60)
    ->Unit(benchmark::kMillisecond);

void BM_current_assembly(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const PhaseSpaceGrid grid = bench_grid();
  const TwoModeAmplitudes psi = mixed_state(cutoff);
  for (auto _ : state) {
    const VectorField j = current(psi, Mode::b, grid);
    benchmark::DoNotOptimize(j.jx.data());
  }
}
BENCHMARK(BM_current_assembly)
    ->Arg(15)
    ->Arg(30)
    ->Unit(benchmark::kMillisecond);

void BM_field_line_trace(benchmark::State& state) {
  const PhaseSpaceGrid grid = bench_grid();
  const VectorField j = current(mixed_state(15), Mode::b, grid);
  const IntegrationSettings settings;
  for (auto _ : state) {
    const FieldLine line = integrate_line(j, {1.5, 0.5}, settings);
    benchmark::DoNotOptimize(line.vertices.data());
  }
}
BENCHMARK(BM_field_line_trace)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
