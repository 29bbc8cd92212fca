#include <benchmark/benchmark.h>

#include "hodgelab/assembly.hpp"
#include "hodgelab/spectrum.hpp"

using namespace hodgelab;

static void BM_GenerateSquare(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate(CanonicalDomain::unit_square(), state.range(0)));
}
BENCHMARK(BM_GenerateSquare)->Arg(32)->Arg(64);

static void BM_AssembleAbsolute1(benchmark::State& state) {
  const auto mesh = generate(CanonicalDomain::unit_square(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hodge_laplacian_absolute(mesh, 1));
  state.counters["dofs"] = mesh.num_simplices(1);
}
BENCHMARK(BM_AssembleAbsolute1)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_AssembleCurlCurl(benchmark::State& state) {
  const auto mesh = generate(CanonicalDomain::unit_cube(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(curl_curl_problem(mesh));
}
BENCHMARK(BM_AssembleCurlCurl)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SolveDirichlet(benchmark::State& state) {
  const auto prob = scalar_laplacian(generate(CanonicalDomain::unit_square(), state.range(0)), BCKind::ScalarDirichlet);
  SolveOptions opt;
  opt.count = 10;
  for (auto _ : state) benchmark::DoNotOptimize(solve(prob, opt));
}
BENCHMARK(BM_SolveDirichlet)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

// Mixed pencil: saddle LDLT in the shift-invert step.
static void BM_SolveAbsolute1(benchmark::State& state) {
  const auto prob = hodge_laplacian_absolute(generate(CanonicalDomain::unit_square(), state.range(0)), 1);
  SolveOptions opt;
  opt.count = 10;
  for (auto _ : state) benchmark::DoNotOptimize(solve(prob, opt));
}
BENCHMARK(BM_SolveAbsolute1)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SolveCurlCurl(benchmark::State& state) {
  const auto prob = curl_curl_problem(generate(CanonicalDomain::unit_cube(), state.range(0)));
  SolveOptions opt;
  opt.count = 6;
  for (auto _ : state) benchmark::DoNotOptimize(solve(prob, opt));
}
BENCHMARK(BM_SolveCurlCurl)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
