// Copyright 2026 The addrl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "addrl/data/split.h"
#include "addrl/data/synthetic.h"
#include "addrl/diff/init.h"
#include "addrl/diff/tape.h"
#include "addrl/eval/metrics.h"
#include "addrl/eval/scorer.h"
#include "addrl/model/addrl_model.h"
#include "addrl/model/config.h"
#include "addrl/model/parameters.h"

namespace addrl {
namespace {

struct Fixture {
  data::SyntheticDataset synthetic;
  data::DatasetSplit split;
  model::ModelConfig config;
  model::ParameterStore params;

  Fixture()
      : synthetic(data::GenerateSynthetic(data::SyntheticSpec{}, 7)),
        split(data::SplitDataset(synthetic.dataset.interactions, 7)),
        config(model::ConfigForDataset(model::ModelConfig{}, synthetic.dataset)),
        params(model::ParameterStore::Initialize(
            config, synthetic.dataset.num_users(),
            synthetic.dataset.num_items(), 7)) {}

  model::Batch MakeBatch(std::size_t size, int n_neg) const {
    const auto pairs = split.TrainPairs();
    model::Batch batch;
    batch.num_negatives = n_neg;
    for (std::size_t p = 0; p < size && p < pairs.size(); ++p) {
      batch.users.push_back(pairs[p].first);
      batch.positives.push_back(pairs[p].second);
      for (int neg : data::SampleNegatives(split, pairs[p].first, n_neg, 7, p))
        batch.negatives.push_back(neg);
    }
    return batch;
  }
};

const Fixture& Shared() {
  static const Fixture fixture;
  return fixture;
}

void BM_MatMulForwardBackward(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  diff::Tensor a = diff::XavierInit({n, n}, 1);
  diff::Tensor b = diff::XavierInit({n, n}, 2);
  a.set_requires_grad(true);
  b.set_requires_grad(true);
  for (auto _ : state) {
    diff::Tape tape;
    const diff::Var loss = diff::Sum(diff::Tanh(diff::MatMul(tape.Watch(a), tape.Watch(b))));
    benchmark::DoNotOptimize(tape.Backward(loss));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
}
BENCHMARK(BM_MatMulForwardBackward)->Arg(32)->Arg(128);

void BM_TotalLossStep(benchmark::State& state) {
  const Fixture& f = Shared();
  const model::AddrlModel model(f.config, f.synthetic.dataset);
  const model::Batch batch = f.MakeBatch(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) {
    diff::Tape tape;
    const model::BoundParams bound = model::BindParameters(tape, f.params, f.config);
    const model::LossGraph loss = model.TotalLoss(tape, bound, batch);
    benchmark::DoNotOptimize(tape.Backward(loss.total));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch.size()));
}
BENCHMARK(BM_TotalLossStep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ScoreAllAndTopN(benchmark::State& state) {
  const Fixture& f = Shared();
  const model::AddrlModel model(f.config, f.synthetic.dataset);
  const eval::Scorer scorer(model, f.params);
  std::vector<double> scores;
  int user = 0;
  const int num_users = f.split.num_users();
  for (auto _ : state) {
    scorer.ScoreAll(user, scores);
    benchmark::DoNotOptimize(eval::TopN(scores, f.split.train[user], 20));
    user = (user + 1) % num_users;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(scores.size()));
}
BENCHMARK(BM_ScoreAllAndTopN);

void BM_RankingMetrics(benchmark::State& state) {
  std::vector<int> ranking(20);
  std::iota(ranking.begin(), ranking.end(), 0);
  const std::vector<int> relevant = {3, 11, 19, 40};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::RecallAtN(ranking, relevant, 20));
    benchmark::DoNotOptimize(eval::NdcgAtN(ranking, relevant, 20));
  }
}
BENCHMARK(BM_RankingMetrics);

}  // namespace
}  // namespace addrl

BENCHMARK_MAIN();
