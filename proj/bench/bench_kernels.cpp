// Serial reference vs OpenMP for the two enumeration-heavy kernels.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <random>

#include <benchmark/benchmark.h>

#include "bjtrace/entanglement.hpp"
#include "bjtrace/kernels.hpp"

using namespace bjtrace;

namespace {

CMatrix random_projection(int n, int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMatrix g(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(nd(rng), nd(rng));
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(g).householderQ() * CMatrix::Identity(n, rank);
  return q * q.adjoint();
}

Execution mode(const benchmark::State& st) { return st.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_SubmatrixMax(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  const CMatrix p = random_projection(n, n / 2, 1);
  for (auto _ : st) benchmark::DoNotOptimize(max_principal_submatrix_norm(p, n / 2, mode(st)).value);
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_SubmatrixMax)->ArgsProduct({{0, 1}, {12, 16}})->Unit(benchmark::kMillisecond);

void BM_Seesaw(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  const CMatrix p2 = build_pr(n, 2).matrix.matrix();
  const int side = n * n;
  for (auto _ : st) {
    const auto runs = seesaw_restarts(p2, side, side, 2, 16, 7, {}, mode(st));
    benchmark::DoNotOptimize(runs[best_run(runs)].value);
  }
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Seesaw)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
