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

#include "addrl/train/config.h"

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::train {

model::ModelConfig ApplyAblation(model::ModelConfig config, const AblationFlags& flags) {
  if (flags.disable_all_disentangling) {
    config.alpha = config.beta = config.gamma = 0.0;
  }
  if (flags.disable_intra || flags.disable_high) config.alpha = 0.0;
  if (flags.disable_inter || flags.disable_high) config.beta = 0.0;
  if (flags.disable_low) config.gamma = 0.0;
  return config;
}

AblationFlags AblationForVariant(std::string_view variant) {
  AblationFlags flags;
  if (variant == "full") return flags;
  if (variant == "w/o_disentangling") {
    flags.disable_all_disentangling = true;
  } else if (variant == "w/o_intra") {
    flags.disable_intra = true;
  } else if (variant == "w/o_inter") {
    flags.disable_inter = true;
  } else if (variant == "w/o_high") {
    flags.disable_high = true;
  } else if (variant == "w/o_low") {
    flags.disable_low = true;
  } else {
    throw ConfigError(fmt::format(
        "unknown ablation variant '{}' (expected one of: {})", variant,
        fmt::join(kAblationVariants, ", ")));
  }
  return flags;
}

void TrainConfig::Validate() const {
  auto fail = [](std::string_view field, auto value, std::string_view rule) {
    throw ConfigError(fmt::format("train.{} = {}: {}", field, value, rule));
  };
  if (!(learning_rate > 0.0)) fail("learning_rate", learning_rate, "must be > 0");
  if (batch_size < 1) fail("batch_size", batch_size, "must be >= 1");
  if (num_negatives < 1) fail("num_negatives", num_negatives, "must be >= 1");
  if (max_epochs < 0) fail("max_epochs", max_epochs, "must be >= 0");
  if (eval_every < 1) fail("eval_every", eval_every, "must be >= 1");
  if (patience < eval_every) fail("patience", patience, "must be >= eval_every");
  if (eval_n < 1) fail("eval_n", eval_n, "must be >= 1");
}

std::size_t GridSpec::size() const {
  auto n = [](const std::vector<double>& v) { return v.empty() ? 1 : v.size(); };
  return n(alpha) * n(beta) * n(gamma) * n(l2) * n(temperature);
}

std::vector<double> DefaultGridLadder() {
  return {1e-3, 5e-3, 1e-2, 5e-2, 1e-1, 5e-1, 1.0, 5.0, 10.0};
}

model::ModelConfig GridPoint::Apply(model::ModelConfig base) const {
  base.alpha = alpha;
  base.beta = beta;
  base.gamma = gamma;
  base.l2 = l2;
  base.temperature = temperature;
  return base;
}

std::string GridPoint::Label() const {
  return fmt::format("alpha={:g},beta={:g},gamma={:g},l2={:g},tau={:g}", alpha, beta,
                     gamma, l2, temperature);
}

std::vector<GridPoint> ExpandGrid(const GridSpec& grid, const model::ModelConfig& base) {
  auto or_base = [](const std::vector<double>& v, double b) {
    return v.empty() ? std::vector<double>{b} : v;
  };
  std::vector<GridPoint> points;
  for (double a : or_base(grid.alpha, base.alpha))
    for (double b : or_base(grid.beta, base.beta))
      for (double g : or_base(grid.gamma, base.gamma))
        for (double l : or_base(grid.l2, base.l2))
          for (double t : or_base(grid.temperature, base.temperature))
            points.push_back(GridPoint{a, b, g, l, t});
  return points;
}

}  // namespace addrl::train
