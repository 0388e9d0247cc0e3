#include <benchmark/benchmark.h>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/kernels.hpp"

namespace {

using namespace crossdiff;

Model bench_model(const Domain& d) {
  Matrix alpha = Matrix::Zero(2, 2);
  alpha(0, 1) = 4.0;
  alpha(1, 0) = 1.0;
  return Model((Vector(2) << 0.1, 0.25).finished(), alpha, Vector::Ones(2),
               (Matrix(2, 2) << 1, 0.2, 0.8, 1).finished(), d, BoundaryCondition::Neumann);
}

Domain square() { return Domain::rectangle(3.14159, 3.14159); }

template <bool Parallel>
void BM_Residual(benchmark::State& state) {
  const Grid grid(square(), static_cast<int>(state.range(0)));
  const Model model = bench_model(grid.domain());
  const Vector u = random_field(grid, 2, 1, 0.5, 1.5).values();
  for (auto _ : state) {
    Vector r = Parallel ? kernels::residual(model, grid, u, {}) : kernels::residual_serial(model, grid, u, {});
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.nodes());
}

template <bool Parallel>
void BM_Jacobian(benchmark::State& state) {
  const Grid grid(square(), static_cast<int>(state.range(0)));
  const Model model = bench_model(grid.domain());
  const Vector u = random_field(grid, 2, 1, 0.5, 1.5).values();
  for (auto _ : state) {
    auto t = Parallel ? kernels::jacobian_triplets(model, grid, u, {}) : kernels::jacobian_triplets_serial(model, grid, u, {});
    benchmark::DoNotOptimize(t.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.nodes());
}

template <bool Parallel>
void BM_BmoScan(benchmark::State& state) {
  const Grid grid(square(), static_cast<int>(state.range(0)));
  const Vector u = random_field(grid, 2, 1, 0.0, 1.0).values();
  const std::vector<double> radii = bmo_radii(grid, 0.4);
  for (auto _ : state) {
    double v = Parallel ? kernels::bmo_scan(grid, 2, u, radii) : kernels::bmo_scan_serial(grid, 2, u, radii);
    benchmark::DoNotOptimize(v);
  }
}

}  // namespace

BENCHMARK(BM_Residual<true>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Residual<false>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Jacobian<true>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Jacobian<false>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_BmoScan<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_BmoScan<false>)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
