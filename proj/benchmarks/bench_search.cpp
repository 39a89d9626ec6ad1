#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>
#include <string>

#include "dlr/densify.hpp"
#include "dlr/index.hpp"
#include "dlr/retrieval.hpp"
#include "dlr/slicing.hpp"

namespace {

constexpr std::uint32_t kVocab = 30522;
constexpr std::size_t kDocs = 20000;

struct Fixture {
  dlr::Index index;
  std::vector<dlr::HybridVector> queries;
};

const Fixture& fixture() {
  static const auto f = [] {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint32_t> term(0, kVocab - 1);
    std::uniform_real_distribution<double> w(0.01, 1.0);
    const auto c = dlr::DensificationConfig::derive(kVocab, 768, dlr::SliceStrategy::kStride);
    const dlr::SliceAssignment a(c);
    auto draw = [&](std::size_t n) {
      std::map<std::uint32_t, double> m;
      while (m.size() < n) m.emplace(term(rng), w(rng));
      dlr::SparseVector v;
      for (const auto& [t, x] : m) v.entries.push_back({t, x});
      return dlr::as_hybrid(dlr::densify(v, a));
    };
    dlr::IndexBuilder b(c, dlr::HybridLayout{768, 0, 0.0});
    for (std::size_t i = 0; i < kDocs; ++i) b.add("d" + std::to_string(i), draw(120));
    auto f = std::make_unique<Fixture>(Fixture{std::move(b).finish(), {}});
    for (int i = 0; i < 16; ++i) f->queries.push_back(draw(8));
    return f;
  }();
  return *f;
}

void BM_SearchExact(benchmark::State& state) {
  const auto& f = fixture();
  const dlr::SearchOptions so{static_cast<unsigned>(state.range(0))};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dlr::search_exact(f.index, f.queries[i++ % f.queries.size()], 1000, so));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kDocs));
  state.SetLabel("scoring only");
}
BENCHMARK(BM_SearchExact)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SearchTwoStage(benchmark::State& state) {
  const auto& f = fixture();
  dlr::TwoStageParams p;
  p.theta = static_cast<double>(state.range(0)) / 10.0;
  p.candidates = 1000;
  p.k = 100;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dlr::search_two_stage(f.index, f.queries[i++ % f.queries.size()], p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kDocs));
  state.SetLabel("scoring only");
}
BENCHMARK(BM_SearchTwoStage)->Arg(0)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
