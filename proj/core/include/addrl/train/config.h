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

#ifndef ADDRL_TRAIN_CONFIG_H_
#define ADDRL_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "addrl/model/config.h"

namespace addrl::train {

struct AblationFlags {
  bool disable_intra = false;
  bool disable_inter = false;
  // Intra and inter together.
  bool disable_high = false;
  bool disable_low = false;
  bool disable_all_disentangling = false;
};

// Zeroes alpha, beta and gamma according to the flags.
model::ModelConfig ApplyAblation(model::ModelConfig config, const AblationFlags& flags);

inline constexpr std::string_view kAblationVariants[] = {
    "full", "w/o_disentangling", "w/o_intra", "w/o_inter", "w/o_high", "w/o_low"};

// Throws ConfigError for names outside kAblationVariants.
AblationFlags AblationForVariant(std::string_view variant);

struct TrainConfig {
  double learning_rate = 1e-4;
  int batch_size = 1024;
  // Negatives drawn per positive.
  int num_negatives = 4;
  int max_epochs = 300;
  int eval_every = 5;
  int patience = 50;
  std::uint64_t seed = 0;
  // Cut-off of the validation metric used for early stopping.
  int eval_n = 20;
  AblationFlags ablation;
  // Drop zero-weight loss terms from the graph instead of scaling them by 0.
  bool prune_zero_weight_terms = false;
  // When set, best.ckpt and last.ckpt are written here at every evaluation.
  std::string checkpoint_dir;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

// Candidate values per hyperparameter; an empty list keeps the base value.
struct GridSpec {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<double> l2;
  std::vector<double> temperature;

  std::size_t size() const;
};

// 1e-3, 5e-3, ..., 5, 10.
std::vector<double> DefaultGridLadder();

struct GridPoint {
  double alpha, beta, gamma, l2, temperature;
  model::ModelConfig Apply(model::ModelConfig base) const;
  std::string Label() const;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

// Cartesian product in lexicographic (alpha, beta, gamma, l2, temperature)
// order; unlisted dimensions take the base value.
std::vector<GridPoint> ExpandGrid(const GridSpec& grid, const model::ModelConfig& base);

}  // namespace addrl::train

#endif  // ADDRL_TRAIN_CONFIG_H_
