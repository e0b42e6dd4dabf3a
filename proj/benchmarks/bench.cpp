#include <benchmark/benchmark.h>

#include "oseen/driver.hpp"
#include "oseen/mesh.hpp"

using namespace oseen;

namespace {

struct Setup {
  Mesh mesh;
  FacetTopology topology;
  VelocitySpace velocity;
  PressureSpace pressure;
  ProblemCase problem;

  explicit Setup(int level, int degree = 2)
      : mesh(mesh_level(level)),
        topology(build_facets(mesh)),
        velocity(build_velocity_space(mesh, topology, degree)),
        pressure(build_pressure_space(mesh, degree)),
        problem(case_lattice_flow(1e-9, 1.0)) {}
};

void BM_MeshLevel(benchmark::State& state) {
  for (auto _ : state) {
    Mesh mesh = mesh_level(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(mesh.cells.data());
  }
}
BENCHMARK(BM_MeshLevel)->Arg(1)->Arg(2)->Arg(3);

void BM_BasisEvaluate(benchmark::State& state) {
  const ReferenceBasis basis(static_cast<int>(state.range(0)));
  const Vec2 p(0.31, 0.21);
  for (auto _ : state) {
    auto table = basis.evaluate(p, 3);
    benchmark::DoNotOptimize(table.data());
  }
}
BENCHMARK(BM_BasisEvaluate)->Arg(2)->Arg(3)->Arg(4);

void BM_AssembleGalerkin(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SpMat a = assemble_galerkin(s.velocity, s.problem, 6);
    benchmark::DoNotOptimize(a.valuePtr());
  }
}
BENCHMARK(BM_AssembleGalerkin)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_AssembleCurlStabilization(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  StabConfig stab;
  stab.delta1 = stab.delta2 = stab.delta3 = 2.0;
  for (auto _ : state) {
    SpMat m = assemble_stabilization(s.velocity, s.problem, stab);
    benchmark::DoNotOptimize(m.valuePtr());
  }
}
BENCHMARK(BM_AssembleCurlStabilization)
    ->Arg(1)
    ->Arg(2)
    ->Unit(benchmark::kMillisecond);

void BM_SolveLattice(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  StabConfig stab;
  stab.delta1 = stab.delta2 = stab.delta3 = 2.0;
  const AssembledSystem system =
      assemble_system(s.velocity, s.pressure, s.problem, stab);
  for (auto _ : state) {
    SolveResult sol = solve(system);
    benchmark::DoNotOptimize(sol.velocity.data());
  }
}
BENCHMARK(BM_SolveLattice)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
