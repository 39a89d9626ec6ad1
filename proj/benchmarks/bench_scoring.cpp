#include <benchmark/benchmark.h>

#include <random>

#include "dlr/densify.hpp"
#include "dlr/scoring.hpp"
#include "dlr/slicing.hpp"

namespace {

dlr::SparseVector random_vector(std::mt19937_64& rng, std::uint32_t vocab, double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  dlr::SparseVector v;
  for (std::uint32_t t = 0; t < vocab; ++t) {
    if (keep(rng)) v.entries.push_back({t, w(rng)});
  }
  return v;
}

struct Pair {
  dlr::HybridVector q, d;
};

Pair make_pair(std::uint32_t dims) {
  std::mt19937_64 rng(1);
  const auto c = dlr::DensificationConfig::derive(30522, dims, dlr::SliceStrategy::kStride);
  const dlr::SliceAssignment a(c);
  return {dlr::as_hybrid(dlr::densify(random_vector(rng, 30522, 0.002), a)),
          dlr::as_hybrid(dlr::densify(random_vector(rng, 30522, 0.005), a))};
}

void BM_Densify(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto c = dlr::DensificationConfig::derive(30522, static_cast<std::uint32_t>(state.range(0)),
                                                  dlr::SliceStrategy::kStride);
  const dlr::SliceAssignment a(c);
  const auto v = random_vector(rng, 30522, 0.005);
  for (auto _ : state) benchmark::DoNotOptimize(dlr::densify(v, a));
}
BENCHMARK(BM_Densify)->Arg(768)->Arg(128);

void BM_Gip(benchmark::State& state) {
  const auto p = make_pair(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dlr::gip(p.q, p.d));
}
BENCHMARK(BM_Gip)->Arg(768)->Arg(256)->Arg(128);

void BM_ApproxGip(benchmark::State& state) {
  const auto p = make_pair(768);
  const double theta = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(dlr::approx_gip(p.q, p.d, theta));
}
BENCHMARK(BM_ApproxGip)->Arg(0)->Arg(3)->Arg(5);

}  // namespace
