#include <benchmark/benchmark.h>

#include <random>

#include <spinmoment/feasibility.hpp>
#include <spinmoment/reduction.hpp>
#include <spinmoment/sdp.hpp>

using namespace spinmoment;

namespace {

MomentMatrix coords_point(int two_j, const Vector3& u, const Vector3& v) {
  RenormalizedCoords c;
  c.spin = SpinNumber(two_j);
  c.u = u;
  c.v = v;
  return moments_from_coords(c);
}

void BM_SpinOperators(benchmark::State& state) {
  const SpinNumber j(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spin_operators(j));
}
BENCHMARK(BM_SpinOperators)->Arg(10)->Arg(30)->Arg(100);

void BM_MinEigenvalueSdp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
  SdpProblem p;
  p.dim = n;
  p.objective = HermitianMatrix::symmetrized(a + a.adjoint());
  p.constraints.push_back({HermitianMatrix::identity(n), 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_MinEigenvalueSdp)->Arg(4)->Arg(11)->Arg(21)->Arg(41);

void BM_ExactDirect(benchmark::State& state) {
  const auto m = coords_point(static_cast<int>(state.range(0)), Vector3(0.1, 0.2, 0.3), Vector3(0.4, 0.3, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(exact_test_direct(m));
}
BENCHMARK(BM_ExactDirect)->Arg(4)->Arg(10)->Arg(20)->Arg(40);

void BM_ExactExtension(benchmark::State& state) {
  const auto rho = rho_from_coords(Vector3(0.1, 0.2, 0.3), Vector3(0.4, 0.3, 0.3));
  const SpinNumber j(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_test_extension(rho, j));
}
BENCHMARK(BM_ExactExtension)->Arg(4)->Arg(8)->Arg(12);

void BM_CheapTests(benchmark::State& state) {
  const auto rho = rho_from_coords(Vector3(0.1, 0.2, 0.3), Vector3(0.4, 0.3, 0.3));
  const SpinNumber j(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_test(rho.rho()));
    benchmark::DoNotOptimize(outer_test(rho.rho(), j));
  }
}
BENCHMARK(BM_CheapTests);

void BM_Classify(benchmark::State& state) {
  const auto m = coords_point(10, Vector3(0.1, 0.2, 0.3), Vector3(state.range(0) / 100.0, 0.3, 0.7 - state.range(0) / 100.0));
  for (auto _ : state) benchmark::DoNotOptimize(classify(m));
}
BENCHMARK(BM_Classify)->Arg(20)->Arg(60)->Arg(90);

}  // namespace

BENCHMARK_MAIN();
