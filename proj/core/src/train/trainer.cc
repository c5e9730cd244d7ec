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

#include "addrl/train/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "addrl/diff/tape.h"
#include "addrl/error.h"
#include "addrl/eval/scorer.h"
#include "addrl/model/addrl_model.h"
#include "addrl/random.h"
#include "addrl/train/adam.h"

namespace addrl::train {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5348;
constexpr std::uint64_t kNegativeStream = 0x4e45;

void Shuffle(std::vector<std::size_t>& order, std::uint64_t seed, std::uint64_t epoch) {
  CounterRng rng(seed, {kShuffleStream, epoch});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
}

struct EpochLoss {
  double total = 0.0, bpr = 0.0, intra = 0.0, inter = 0.0, low = 0.0;
};

}  // namespace

eval::MetricSummary EvaluateParams(const data::Dataset& dataset,
                                   const data::DatasetSplit& split,
                                   const model::ModelConfig& config,
                                   const model::ParameterStore& params, bool test, int n) {
  model::AddrlModel model(config, dataset);
  eval::Scorer scorer(model, params);
  return eval::EvaluateRanking(split, test ? eval::EvalSplit::kTest
                                           : eval::EvalSplit::kValidation,
                               n, eval::ModelScores(scorer));
}

TrainResult Train(const data::Dataset& dataset, const data::DatasetSplit& split,
                  const model::ModelConfig& model_config, const TrainConfig& train_config,
                  const ProgressFn& progress, DataInfo data_info) {
  train_config.Validate();
  const model::ModelConfig config = ApplyAblation(model_config, train_config.ablation);
  const model::AddrlModel model(config, dataset);
  const auto pairs = split.TrainPairs();
  if (pairs.empty()) throw DataError("training split has no interactions");
  if (split.num_users() != dataset.interactions.num_users() ||
      split.num_items != dataset.num_items()) {
    throw DataError("split does not match the dataset");
  }

  model::ParameterStore params = model::ParameterStore::Initialize(
      config, split.num_users(), split.num_items, train_config.seed);
  params.SetRequiresGrad(true);
  Adam adam(AdamConfig{.learning_rate = train_config.learning_rate});
  const model::LossOptions options{train_config.prune_zero_weight_terms};
  const std::uint64_t negative_seed = Mix64(train_config.seed ^ kNegativeStream);

  TrainResult result;
  Checkpoint& best = result.best;
  best.model_config = config;
  best.train_config = train_config;
  data_info.num_users = split.num_users();
  data_info.num_items = split.num_items;
  best.data = data_info;
  best.rng.seed = train_config.seed;
  RngState rng_state = best.rng;
  int best_epoch = 0;

  auto snapshot = [&](int epoch) {
    best.params = params;
    best.params.SetRequiresGrad(false);
    best.epoch = epoch;
    best.rng = rng_state;
  };
  auto save = [&](const model::ParameterStore& p, int epoch, const char* file) {
    Checkpoint ck = best;
    if (&p != &best.params) {
      ck.params = p;
      ck.params.SetRequiresGrad(false);
      ck.epoch = epoch;
      ck.rng = rng_state;
    }
    ck.history = result.history;
    std::filesystem::create_directories(train_config.checkpoint_dir);
    SaveCheckpoint(ck, std::filesystem::path(train_config.checkpoint_dir) / file);
  };
  auto evaluate = [&](HistoryRow& row) {
    const eval::MetricSummary m =
        EvaluateParams(dataset, split, config, params, false, train_config.eval_n);
    row.val_recall = m.recall;
    row.val_ndcg = m.ndcg;
  };

  HistoryRow initial;
  evaluate(initial);
  result.best_val_recall = *initial.val_recall;
  snapshot(0);
  result.history.push_back(initial);
  if (progress) progress(initial);
  if (!train_config.checkpoint_dir.empty()) {
    save(best.params, 0, "best.ckpt");
    save(params, 0, "last.ckpt");
  }

  std::vector<std::size_t> order(pairs.size());
  std::vector<diff::Tensor> grads;
  const auto batch_size = static_cast<std::size_t>(train_config.batch_size);
  const int n_neg = train_config.num_negatives;
  for (int epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Shuffle(order, train_config.seed, static_cast<std::uint64_t>(epoch));
    EpochLoss sums;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      model::Batch batch;
      batch.num_negatives = n_neg;
      for (std::size_t p = start; p < end; ++p) {
        const auto [user, item] = pairs[order[p]];
        batch.users.push_back(user);
        batch.positives.push_back(item);
        for (int neg : data::SampleNegatives(split, user, n_neg, negative_seed,
                                             rng_state.sample_step++)) {
          batch.negatives.push_back(neg);
        }
      }
      diff::Tape tape;
      const model::BoundParams bound = model::BindParameters(tape, params, config);
      const model::LossGraph loss = model.TotalLoss(tape, bound, batch, options);
      if (!std::isfinite(loss.report.total)) {
        throw NumericalError(fmt::format(
            "non-finite loss at epoch {} batch {} (bpr {}, intra {}, inter {}, low {})",
            epoch, start / batch_size, loss.report.bpr, loss.report.intra,
            loss.report.inter, loss.report.low));
      }
      const diff::Gradients g = tape.Backward(loss.total);
      grads.clear();
      for (const auto& [name, tensor] : params.entries()) grads.push_back(g.of(tensor));
      adam.Step(params, grads);

      sums.total += loss.report.total;
      sums.bpr += loss.report.bpr;
      sums.intra += config.alpha * loss.report.intra;
      sums.inter += config.beta * loss.report.inter;
      sums.low += config.gamma * loss.report.low;
    }
    rng_state.epoch = static_cast<std::uint64_t>(epoch);

    const double n = static_cast<double>(pairs.size());
    HistoryRow row;
    row.epoch = epoch;
    row.loss = model::LossReport{sums.total / n, sums.bpr / n, sums.intra / n,
                                 sums.inter / n, sums.low / n};
    const bool last = epoch == train_config.max_epochs;
    bool stop = false;
    if (epoch % train_config.eval_every == 0 || last) {
      evaluate(row);
      if (*row.val_recall > result.best_val_recall) {
        result.best_val_recall = *row.val_recall;
        best_epoch = epoch;
        snapshot(epoch);
      }
      stop = epoch - best_epoch >= train_config.patience;
    }
    result.history.push_back(row);
    result.epochs_run = epoch;
    if (progress) progress(row);
    if (!train_config.checkpoint_dir.empty() && row.val_recall) {
      save(best.params, best.epoch, "best.ckpt");
      save(params, epoch, "last.ckpt");
    }
    if (stop) break;
  }
  best.history = result.history;
  return result;
}

AblationRow RunAblation(const data::Dataset& dataset, const data::DatasetSplit& split,
                        const model::ModelConfig& model_config,
                        const TrainConfig& train_config, std::string_view variant, int n) {
  TrainConfig tc = train_config;
  tc.ablation = AblationForVariant(variant);
  TrainResult r = Train(dataset, split, model_config, tc);
  AblationRow row;
  row.variant = std::string(variant);
  row.validation = EvaluateParams(dataset, split, r.best.model_config, r.best.params, false, n);
  row.test = EvaluateParams(dataset, split, r.best.model_config, r.best.params, true, n);
  row.best_epoch = r.best.epoch;
  row.epochs_run = r.epochs_run;
  row.history = std::move(r.history);
  return row;
}

std::vector<AblationRow> RunAblations(const data::Dataset& dataset,
                                      const data::DatasetSplit& split,
                                      const model::ModelConfig& model_config,
                                      const TrainConfig& train_config,
                                      std::span<const std::string> variants, int jobs,
                                      int n) {
  for (const std::string& v : variants) AblationForVariant(v);
  std::vector<AblationRow> rows(variants.size());
  ParallelFor(static_cast<int>(variants.size()), jobs, [&](int i) {
    rows[i] = RunAblation(dataset, split, model_config, train_config, variants[i], n);
  });
  return rows;
}

void WriteAblationCsv(std::span<const AblationRow> rows, std::ostream& out) {
  out << kAblationHeader << '\n';
  for (const AblationRow& r : rows) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n", r.variant,
                       r.test.recall, r.test.ndcg, r.validation.recall, r.validation.ndcg,
                       r.best_epoch, r.epochs_run);
  }
}

GridResult GridSearch(const data::Dataset& dataset, const data::DatasetSplit& split,
                      const model::ModelConfig& model_config,
                      const TrainConfig& train_config, const GridSpec& grid, int jobs) {
  const std::vector<GridPoint> points = ExpandGrid(grid, model_config);
  GridResult result;
  result.rows.resize(points.size());
  ParallelFor(static_cast<int>(points.size()), jobs, [&](int i) {
    const model::ModelConfig config = points[i].Apply(model_config);
    TrainResult r = Train(dataset, split, config, train_config);
    GridRow& row = result.rows[i];
    row.point = points[i];
    row.validation = EvaluateParams(dataset, split, r.best.model_config, r.best.params,
                                    false, train_config.eval_n);
    row.best_epoch = r.best.epoch;
  });
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const GridRow& a = result.rows[i];
    const GridRow& b = result.rows[result.best];
    if (a.validation.recall > b.validation.recall ||
        (a.validation.recall == b.validation.recall &&
         (a.validation.ndcg > b.validation.ndcg ||
          (a.validation.ndcg == b.validation.ndcg && a.point < b.point)))) {
      result.best = i;
    }
  }
  return result;
}

void WriteGridCsv(const GridResult& result, std::ostream& out) {
  out << kGridHeader << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const GridRow& r = result.rows[i];
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n",
                       r.point.alpha, r.point.beta, r.point.gamma, r.point.l2,
                       r.point.temperature, r.validation.recall, r.validation.ndcg,
                       r.best_epoch, i == result.best ? 1 : 0);
  }
}

void ParallelFor(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace addrl::train
