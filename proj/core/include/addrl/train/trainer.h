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

#ifndef ADDRL_TRAIN_TRAINER_H_
#define ADDRL_TRAIN_TRAINER_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrl/data/dataset.h"
#include "addrl/data/split.h"
#include "addrl/eval/metrics.h"
#include "addrl/model/config.h"
#include "addrl/train/checkpoint.h"
#include "addrl/train/config.h"

namespace addrl::train {

struct TrainResult {
  // Best-validation parameters; equals the initial model when no
  // evaluation improved on it.
  Checkpoint best;
  std::vector<HistoryRow> history;
  int epochs_run = 0;
  double best_val_recall = 0.0;
};

// Called after every epoch (and once for epoch 0) with its history row.
using ProgressFn = std::function<void(const HistoryRow&)>;

// Mini-batch Adam on the total objective. The model config must already
// match the dataset (see model::ConfigForDataset); ablation flags in
// `train_config` are applied on top of it. Throws DataError for an empty
// training set and NumericalError on a non-finite loss.
// `data_info` is copied into every checkpoint; its user and item counts are
// taken from the split.
TrainResult Train(const data::Dataset& dataset, const data::DatasetSplit& split,
                  const model::ModelConfig& model_config, const TrainConfig& train_config,
                  const ProgressFn& progress = {}, DataInfo data_info = {});

// Validation or test metrics of a parameter snapshot.
eval::MetricSummary EvaluateParams(const data::Dataset& dataset,
                                   const data::DatasetSplit& split,
                                   const model::ModelConfig& config,
                                   const model::ParameterStore& params, bool test, int n);

struct AblationRow {
  std::string variant;
  eval::MetricSummary validation;
  eval::MetricSummary test;
  int best_epoch = 0;
  int epochs_run = 0;
  std::vector<HistoryRow> history;
};

AblationRow RunAblation(const data::Dataset& dataset, const data::DatasetSplit& split,
                        const model::ModelConfig& model_config,
                        const TrainConfig& train_config, std::string_view variant,
                        int n = 20);
// Runs the variants on up to `jobs` threads; rows come back in input order.
std::vector<AblationRow> RunAblations(const data::Dataset& dataset,
                                      const data::DatasetSplit& split,
                                      const model::ModelConfig& model_config,
                                      const TrainConfig& train_config,
                                      std::span<const std::string> variants, int jobs = 1,
                                      int n = 20);

inline constexpr std::string_view kAblationHeader =
    "variant,recall20,ndcg20,val_recall20,val_ndcg20,best_epoch,epochs_run";
void WriteAblationCsv(std::span<const AblationRow> rows, std::ostream& out);

struct GridRow {
  GridPoint point;
  eval::MetricSummary validation;
  int best_epoch = 0;
};

struct GridResult {
  std::vector<GridRow> rows;  // grid expansion order
  std::size_t best = 0;       // index into rows
};

// Trains every grid point with the same seed. The best row maximises
// validation Recall@n, then NDCG@n, then comes first in lexicographic
// (alpha, beta, gamma, l2, temperature) order.
GridResult GridSearch(const data::Dataset& dataset, const data::DatasetSplit& split,
                      const model::ModelConfig& model_config,
                      const TrainConfig& train_config, const GridSpec& grid, int jobs = 1);

inline constexpr std::string_view kGridHeader =
    "alpha,beta,gamma,l2,temperature,val_recall20,val_ndcg20,best_epoch,selected";
void WriteGridCsv(const GridResult& result, std::ostream& out);

// Runs fn(0..count-1) on up to `jobs` threads.
void ParallelFor(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace addrl::train

#endif  // ADDRL_TRAIN_TRAINER_H_
