#include <benchmark/benchmark.h>

#include <cmath>

#include "coboson/exchange.hpp"
#include "coboson/fock.hpp"
#include "coboson/norm_table.hpp"
#include "coboson/statistics.hpp"

using namespace coboson;

static void BM_HydrogenicLambda(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(hydrogenic_lambda(n, 0.01));
}
BENCHMARK(BM_HydrogenicLambda)->Arg(2)->Arg(50)->Arg(5000);

static void BM_NormTableFloat(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const auto lam = hydrogenic_exchange_table(HydrogenicProfile(0.01), n_max + 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_norm_table(lam, n_max));
}
BENCHMARK(BM_NormTableFloat)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_StatsSweepFloat(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const auto lam = hydrogenic_exchange_table(HydrogenicProfile(0.01), n_max + 2);
  const auto table = build_norm_table(lam, n_max);
  const double a3 = std::pow(0.01, 3);
  for (auto _ : state) {
    double acc = 0;
    for (int n = 1; n <= n_max; ++n) {
      try {
        acc += to_double(moment_report(table, n, n * a3).g2);
      } catch (const PrecisionDomainError&) {
        break;
      }
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_StatsSweepFloat)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_NormTableRational(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const auto lam = ExchangeTable<Rational>::from_profile(
      uniform_profile<Rational>(modes), modes + 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_norm_table(lam, modes + 2));
}
BENCHMARK(BM_NormTableRational)->Arg(8)->Arg(32);

static void BM_OracleIdentitySuite(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const auto prof = uniform_profile<Rational>(modes);
  for (auto _ : state)
    benchmark::DoNotOptimize(check_identities(prof, modes));
}
BENCHMARK(BM_OracleIdentitySuite)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
