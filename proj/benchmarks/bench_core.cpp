#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "metrobound/legendre.hpp"
#include "metrobound/linalg.hpp"
#include "metrobound/qfi.hpp"
#include "metrobound/spin_algebra.hpp"

using namespace metrobound;

namespace {

CMat random_hermitian(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMat a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

void BM_LambdaMaxDense(benchmark::State& state) {
  const CMat m = random_hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::lambda_max(m));
}
BENCHMARK(BM_LambdaMaxDense)->Arg(16)->Arg(64)->Arg(256);

void BM_LambdaMaxTridiagonal(benchmark::State& state) {
  const Index n = state.range(0);
  const RVec d = RVec::LinSpaced(n, -1.0, 1.0);
  const RVec o = RVec::Constant(n - 1, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::lambda_max_tridiagonal(d, o));
}
BENCHMARK(BM_LambdaMaxTridiagonal)->Arg(51)->Arg(201)->Arg(1001);

void BM_FamilySpinSqueezing(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Basis b = Basis::symmetric(N, 0.5);
  const SpinTriple j = collective_operators(b);
  const Operator z2 = j.z * j.z;
  const linalg::HermitianFamily f({j.y.matrix, (j.x * j.x).matrix, j.z.matrix, z2.matrix});
  const std::vector<double> c = {0.7, -1.1, 0.4, -4.0};
  for (auto _ : state) benchmark::DoNotOptimize(f.lambda_max(c));
}
BENCHMARK(BM_FamilySpinSqueezing)->Arg(50)->Arg(200)->Arg(1000);

void BM_HatSpinSqueezing(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Basis b = Basis::symmetric(N, 0.5);
  const SpinTriple j = collective_operators(b);
  ConstraintSet cs(b);
  cs.add(j.y, 0.4 * N, "Jy");
  cs.add(j.x * j.x, 0.05 * N, "Jx2");
  const LegendreProblem p(cs, j.z);
  const std::vector<double> r = {0.8, -2.0};
  for (auto _ : state) benchmark::DoNotOptimize(p.hat(r).value);
}
BENCHMARK(BM_HatSpinSqueezing)->Arg(10)->Arg(50)->Arg(200);

void BM_HatDickeFidelity(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Basis b = Basis::symmetric(N, 0.5);
  ConstraintSet cs(b);
  cs.add(Operator(dicke_state(N, N / 2, Axis::X, Basis::Kind::Symmetric).density(), b), 0.5, "F");
  const LegendreProblem p(cs, collective_operator(Axis::Z, b));
  const std::vector<double> r = {3.0 * N};
  for (auto _ : state) benchmark::DoNotOptimize(p.hat(r).value);
}
BENCHMARK(BM_HatDickeFidelity)->Arg(10)->Arg(50)->Arg(100);

void BM_QfiMixed(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuantumState s = thermal_dicke(N, 1.0, Basis::Kind::Symmetric);
  const Operator g = collective_operator(Axis::Z, s.basis());
  for (auto _ : state) benchmark::DoNotOptimize(qfi(s, g));
}
BENCHMARK(BM_QfiMixed)->Arg(20)->Arg(100)->Arg(400);

void BM_QfiFullBasis(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuantumState s = mixture({{0.7, ghz_state(N, Basis::Kind::Full)},
                                  {0.3, dicke_state(N, N / 2, Axis::X, Basis::Kind::Full)}});
  const Operator g = collective_operator(Axis::Z, s.basis());
  for (auto _ : state) benchmark::DoNotOptimize(qfi(s, g));
}
BENCHMARK(BM_QfiFullBasis)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
