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

#ifndef ADDRL_DATA_SYNTHETIC_H_
#define ADDRL_DATA_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "addrl/data/dataset.h"

namespace addrl::data {

struct SyntheticSpec {
  int num_users = 200;
  int num_items = 300;
  std::vector<int> attribute_sizes = {4, 3, 5};
  int d0_textual = 32;
  int d0_visual = 32;
  int interactions_per_user = 20;
  // Standard deviation of the feature noise, and the weight floor that lets
  // users occasionally pick items matching none of their preferences.
  double noise = 0.1;
};

struct SyntheticDataset {
  Dataset dataset;
  // preferred_values[u][k]: the planted preferred value of attribute k.
  std::vector<std::vector<int>> preferred_values;
};

// Planted-attribute generator.
//  * Item labels are uniform per attribute.
//  * A modality feature is M * concat(one_hot(label_k)) / sqrt(K) plus
//    N(0, noise^2) per entry, with a per-modality Gaussian mixing matrix M.
//  * User u samples interactions_per_user distinct items without
//    replacement, with weight (#attributes matching u's preferences + noise).
// Users are named u0.., items i0..; item indices follow first appearance in
// the user-major interaction list, so saving and reloading reproduces the
// dataset exactly. Deterministic in (spec, seed).
SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace addrl::data

#endif  // ADDRL_DATA_SYNTHETIC_H_
