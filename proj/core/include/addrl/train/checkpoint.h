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

#ifndef ADDRL_TRAIN_CHECKPOINT_H_
#define ADDRL_TRAIN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrl/model/addrl_model.h"
#include "addrl/model/config.h"
#include "addrl/model/parameters.h"
#include "addrl/train/config.h"

namespace addrl::train {

inline constexpr std::string_view kCheckpointTag = "ADDRL-CKPT-1";

// One epoch of training history. Loss columns are per-positive means of the
// weighted contributions (alpha * intra etc.), so a zeroed term reads 0.
struct HistoryRow {
  int epoch = 0;
  std::optional<model::LossReport> loss;  // absent for epoch 0
  std::optional<double> val_recall;       // present on evaluation epochs
  std::optional<double> val_ndcg;

  friend bool operator==(const HistoryRow& a, const HistoryRow& b);
};

struct RngState {
  std::uint64_t seed = 0;
  // Epochs completed and negatives drawn so far.
  std::uint64_t epoch = 0;
  std::uint64_t sample_step = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

struct DataInfo {
  int num_users = 0;
  int num_items = 0;
  std::uint64_t split_seed = 0;
  int kcore = 0;

  friend bool operator==(const DataInfo&, const DataInfo&) = default;
};

struct Checkpoint {
  model::ModelConfig model_config;
  TrainConfig train_config;
  model::ParameterStore params;
  // Epoch at which `params` was taken.
  int epoch = 0;
  std::vector<HistoryRow> history;
  RngState rng;
  DataInfo data;
};

void WriteCheckpoint(const Checkpoint& checkpoint, std::ostream& out);
// Throws DataError on a missing tag, malformed content or shape mismatch.
Checkpoint ReadCheckpoint(std::istream& in, std::string_view source = "<stream>");
void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

inline constexpr std::string_view kHistoryHeader =
    "epoch,loss_total,loss_bpr,loss_intra,loss_inter,loss_low,val_recall20,val_ndcg20";

// Missing values are written as empty cells.
void WriteHistoryCsv(std::span<const HistoryRow> history, std::ostream& out);
void SaveHistoryCsv(std::span<const HistoryRow> history, const std::filesystem::path& path);

}  // namespace addrl::train

#endif  // ADDRL_TRAIN_CHECKPOINT_H_
