#include <benchmark/benchmark.h>

#include <memory>

#include "solidangle/elliptic.hpp"
#include "solidangle/grid.hpp"
#include "solidangle/lambda.hpp"
#include "solidangle/oracles.hpp"
#include "solidangle/potential.hpp"
#include "solidangle/seifert_mesh.hpp"

using namespace solidangle;

namespace {

const auto kCircle = std::make_shared<Circle>();
const auto kTrefoil = std::make_shared<TorusKnot>(2, 3, 2.0, 0.5);
const auto kTorus = std::make_shared<FlatTorus4>(2.0, 0.5);

void BM_EllipticK(benchmark::State& state) {
  double k = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic::ellK(k));
    k = k < 0.99 ? k + 1e-4 : 0.3;
  }
}
BENCHMARK(BM_EllipticK);

void BM_HeumanLambda(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(elliptic::heuman_lambda0(0.7, 0.6));
}
BENCHMARK(BM_HeumanLambda);

void BM_Lambda(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double u = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_eval(n, u));
    u = u < 0.9 ? u + 1e-3 : -0.9;
  }
}
BENCHMARK(BM_Lambda)->Arg(1)->Arg(2)->Arg(3);

void BM_CircleOracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(oracles::circle_phi({0.7, 0.3}));
}
BENCHMARK(BM_CircleOracle);

void BM_PhiCircle(benchmark::State& state) {
  const Vec x = make_vec({0.3, 0.4, 0.5});
  const double tol = state.range(0) == 0 ? kDefaultTol : kGridTol;
  for (auto _ : state) benchmark::DoNotOptimize(phi(*kCircle, x, tol));
}
BENCHMARK(BM_PhiCircle)->Arg(0)->Arg(1);

void BM_PhiTrefoil(benchmark::State& state) {
  const Vec x = make_vec({0.5, 1.0, -0.3});
  for (auto _ : state) benchmark::DoNotOptimize(phi(*kTrefoil, x));
}
BENCHMARK(BM_PhiTrefoil);

void BM_PhiNearCurve(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const Vec x = make_vec({1.0 + eps, 0.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(phi(*kCircle, x));
}
BENCHMARK(BM_PhiNearCurve)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PhiAndGradTrefoil(benchmark::State& state) {
  const Vec x = make_vec({0.5, 1.0, -0.3});
  for (auto _ : state) benchmark::DoNotOptimize(phi_and_grad(*kTrefoil, x));
}
BENCHMARK(BM_PhiAndGradTrefoil);

void BM_PhiFlatTorus(benchmark::State& state) {
  const Vec x = make_vec({1.0, 0.5, 0.2, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(phi(*kTorus, x));
}
BENCHMARK(BM_PhiFlatTorus)->Unit(benchmark::kMillisecond);

void BM_SeifertMeshDisk(benchmark::State& state) {
  const SeifertMesh disk = disk_mesh(16, 512);
  const Vec x = make_vec({0.2, 0.1, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(phi_via_seifert_mesh(disk, x));
}
BENCHMARK(BM_SeifertMeshDisk)->Unit(benchmark::kMillisecond);

void BM_SampleGrid(benchmark::State& state) {
  const Box box{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_grid(*kCircle, Angle(0.25), box, res));
}
BENCHMARK(BM_SampleGrid)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
