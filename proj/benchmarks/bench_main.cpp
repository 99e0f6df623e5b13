#include <benchmark/benchmark.h>

#include <vector>

#include "mapllt/density.hpp"
#include "mapllt/expm.hpp"
#include "mapllt/fourier.hpp"
#include "mapllt/models.hpp"
#include "mapllt/rng.hpp"
#include "mapllt/simulate.hpp"
#include "mapllt/spectral.hpp"

namespace {

using namespace mapllt;
using sim::PhiloxRng;
using sim::SeedSpec;

model::LocalTimeMapModel symmetric_lt() {
  Matrix g(2, 2);
  g << -1, 1, 1, -1;
  return model::LocalTimeMapModel(markov::Generator(g));
}

model::DiscreteMapModel gauss_walk() {
  Matrix p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  Vector meanLo(1), meanHi(1);
  meanLo << -0.5;
  meanHi << 1.0;
  Matrix unit(1, 1);
  unit << 1.0;
  std::vector<std::optional<model::IncrementLaw>> laws{
      model::IncrementLaw::gaussian(meanLo, unit), model::IncrementLaw::gaussian(meanHi, unit),
      model::IncrementLaw::gaussian(meanLo, unit), model::IncrementLaw::gaussian(meanHi, unit)};
  return model::center(model::DiscreteMapModel(markov::StochasticMatrix(p), laws, 1));
}

void BM_PhiloxU64(benchmark::State& state) {
  PhiloxRng rng(SeedSpec{0x1234, 0}, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.nextU64());
}
BENCHMARK(BM_PhiloxU64);

void BM_CtmcPath(benchmark::State& state) {
  const auto m = symmetric_lt();
  const double t = static_cast<double>(state.range(0));
  std::uint32_t path = 0;
  for (auto _ : state) {
    PhiloxRng rng(SeedSpec{0x1234, 0}, path++);
    benchmark::DoNotOptimize(sim::simulate_local_time_path(m, 0, t, rng));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CtmcPath)->Arg(25)->Arg(100)->Arg(400);

void BM_DiscretePath(benchmark::State& state) {
  const auto model = gauss_walk();
  const long steps = state.range(0);
  std::uint32_t path = 0;
  for (auto _ : state) {
    PhiloxRng rng(SeedSpec{0x1234, 0}, path++);
    benchmark::DoNotOptimize(sim::simulate_discrete_path(model, 0, steps, rng));
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_DiscretePath)->Arg(100)->Arg(400);

void BM_ComplexExpm(benchmark::State& state) {
  const auto m = symmetric_lt();
  Vector zeta(1);
  zeta << 0.7;
  for (auto _ : state)
    benchmark::DoNotOptimize(fourier::fourier_matrix(m, 5.0, zeta));
}
BENCHMARK(BM_ComplexExpm);

void BM_DominantEigen(benchmark::State& state) {
  const auto m = gauss_walk();
  Vector zeta(1);
  zeta << 0.4;
  const auto fm = fourier::fourier_one_step(m, zeta);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::dominant_eigen(fm));
}
BENCHMARK(BM_DominantEigen);

void BM_KdeAccumulate1D(benchmark::State& state) {
  Matrix sigma(1, 1);
  sigma << 1.0;
  const auto grid = sim::default_grid(markov::CovarianceMatrix(sigma));
  PhiloxRng rng(SeedSpec{0x99, 0}, 0);
  sim::KdeAccumulator acc(grid, Vector::Constant(1, 0.1));
  for (auto _ : state) {
    const double x = rng.nextNormal();
    acc.add(&x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KdeAccumulate1D);

}  // namespace

BENCHMARK_MAIN();
