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

#ifndef ADDRL_TRAIN_ADAM_H_
#define ADDRL_TRAIN_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "addrl/diff/tensor.h"
#include "addrl/model/parameters.h"

namespace addrl::train {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Dense Adam with bias correction. Moment buffers are created on the first
// step and follow the order of ParameterStore::entries().
class Adam {
 public:
  explicit Adam(AdamConfig config = {});

  // grads[i] belongs to params.entries()[i]. A non-finite gradient throws
  // NumericalError naming the tensor, before any parameter is touched.
  void Step(model::ParameterStore& params, std::span<const diff::Tensor> grads);

  const AdamConfig& config() const { return config_; }
  std::int64_t steps() const { return steps_; }

 private:
  AdamConfig config_;
  std::int64_t steps_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace addrl::train

#endif  // ADDRL_TRAIN_ADAM_H_
