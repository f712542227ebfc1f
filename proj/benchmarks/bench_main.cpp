#include <benchmark/benchmark.h>

#include "fevo/equilibria.hpp"
#include "fevo/integrator.hpp"

using namespace fevo;

namespace {

const Model kPcd{GameSpec::opd(3, 0, 5, 1, 2), EnvCoupling{2, 0.5}, Protocol::PairwiseComparison};
const Model kRd{GameSpec::opd(3, 0, 5, 1, 2), EnvCoupling{2, 0.5}, Protocol::Replicator};

void BM_FieldEval(benchmark::State& state) {
  const VectorField f = general_field(state.range(0) ? kPcd : kRd);
  const Vec v{0.3, 0.4, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(f(v));
}
BENCHMARK(BM_FieldEval)->Arg(0)->Arg(1);

void BM_Integrate(benchmark::State& state) {
  const VectorField f = general_field(kPcd);
  IntegratorConfig c;
  c.method = state.range(0) ? Method::RK45Adaptive : Method::RK4Fixed;
  c.step = 1e-2;
  c.t_end = 100;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, {{0.9, 0.1}, 0.1, 0}, c));
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FixedPointSearch(benchmark::State& state) {
  const VectorField f = general_field(kPcd);
  const auto dom = SearchDomain::unit(f.layout);
  for (auto _ : state) benchmark::DoNotOptimize(find_fixed_points(f, dom, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FixedPointSearch)->Arg(6)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_Eigenvalues3(benchmark::State& state) {
  const Matrix m(3, 3, {-1.2, 0.4, 2.0, 0.3, -0.7, 1.1, 0.9, -2.2, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues3);

}  // namespace

BENCHMARK_MAIN();
