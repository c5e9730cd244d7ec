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

#ifndef ADDRL_MODEL_TOY_H_
#define ADDRL_MODEL_TOY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "addrl/data/dataset.h"
#include "addrl/diff/grad_check.h"
#include "addrl/model/addrl_model.h"
#include "addrl/model/parameters.h"

namespace addrl::model {

// A tiny fully specified problem: 4 users, 6 items, attributes of sizes
// (2, 3, 2) plus the residual chunk, chunk_dim 4, d0 = 8 for both
// modalities, alpha = beta = gamma = 0.5, l2 = 0.01, tau = 0.2, and one
// batch holding every interaction with 2 sampled negatives each.
struct ToyProblem {
  data::Dataset dataset;
  ModelConfig config;
  ParameterStore params;
  Batch batch;
};

ToyProblem MakeToyProblem(std::uint64_t seed);

struct NamedGradCheck {
  std::string loss;  // bpr, intra, inter, low or total
  diff::GradCheckResult result;
};

// Finite-difference check of each loss component and the total over every
// parameter tensor of the toy problem.
std::vector<NamedGradCheck> ToyGradCheck(std::uint64_t seed, double eps = 1e-5);

}  // namespace addrl::model

#endif  // ADDRL_MODEL_TOY_H_
