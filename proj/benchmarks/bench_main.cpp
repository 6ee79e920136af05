#include <random>

#include <benchmark/benchmark.h>

#include "orbiton/classify.hpp"
#include "orbiton/coadjoint.hpp"
#include "orbiton/families.hpp"
#include "orbiton/fredholm.hpp"
#include "orbiton/kindex.hpp"
#include "orbiton/lie_core.hpp"

namespace {

using namespace orbiton;

// g434 in a random basis of condition about 10.
LieAlgebra mixed_g434() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Matrix p = Matrix::Identity(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p(i, j) += 0.3 * normal(rng);
  return change_basis(family_algebra(Family::g434, default_params(Family::g434)), p);
}

void BM_ClassifyMd4(benchmark::State& state) {
  const LieAlgebra g = mixed_g434();
  for (auto _ : state) benchmark::DoNotOptimize(classify_md4(g));
}
BENCHMARK(BM_ClassifyMd4);

void BM_SampleOrbit(benchmark::State& state) {
  const LieAlgebra g = family_algebra(Family::g442, {});
  Functional f(4);
  f << 0.3, -0.7, 1.1, 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(sample_orbit(g, f, static_cast<int>(state.range(0)), 0.5, 42));
}
BENCHMARK(BM_SampleOrbit)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Winding(benchmark::State& state) {
  const MatrixLoop loop = u_plus();
  for (auto _ : state) benchmark::DoNotOptimize(winding_number(loop, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Winding)->Arg(1 << 14)->Arg(kDefaultWindingGrid)->Unit(benchmark::kMillisecond);

void BM_SmithNormalForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long long> entry(-20, 20);
  IntMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = entry(rng);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(6);

void BM_FredholmIndex(benchmark::State& state) {
  const LogGrid grid = build_grid(6.0, static_cast<int>(state.range(0)));
  ThresholdPolicy policy;
  policy.dense_limit = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const DiscreteOperator op = assemble_operator(1, grid);
    benchmark::DoNotOptimize(numerical_index(op, policy));
  }
}
// Dense SVD against the block iteration at the same size.
BENCHMARK(BM_FredholmIndex)->Args({256, 512})->Args({256, 0})->Args({1024, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
