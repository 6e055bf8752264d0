#include <benchmark/benchmark.h>

#include <random>

#include "fever/scoring/scoring.hpp"

namespace corpus = fever::corpus;
namespace scoring = fever::scoring;

namespace {

void BM_Score(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> doc(0, 50), sent(1, 8), lab(0, 2);
  std::vector<corpus::ClaimRecord> gold;
  std::vector<scoring::PredictionRecord> preds;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    corpus::ClaimRecord c;
    c.id = i;
    c.label = static_cast<corpus::Label>(lab(rng));
    if (c.label != corpus::Label::nei)
      c.evidence.push_back({{"d" + std::to_string(doc(rng)), sent(rng)}});
    scoring::PredictionRecord p;
    p.id = i;
    p.label = static_cast<corpus::Label>(lab(rng));
    for (int k = 0; k < 5; ++k) p.evidence.push_back({"d" + std::to_string(doc(rng)), sent(rng)});
    gold.push_back(c);
    preds.push_back(p);
  }
  const auto index = scoring::index_predictions(preds);
  for (auto _ : state) benchmark::DoNotOptimize(scoring::score(index, gold));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Score)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
