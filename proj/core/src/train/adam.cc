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

#include "addrl/train/adam.h"

#include <cmath>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::train {

Adam::Adam(AdamConfig config) : config_(config) {
  if (!(config_.learning_rate > 0.0) || !(config_.epsilon > 0.0) ||
      config_.beta1 < 0.0 || config_.beta1 >= 1.0 || config_.beta2 < 0.0 ||
      config_.beta2 >= 1.0) {
    throw ConfigError("adam: need lr > 0, eps > 0 and betas in [0, 1)");
  }
}

void Adam::Step(model::ParameterStore& params, std::span<const diff::Tensor> grads) {
  auto& entries = params.entries();
  if (grads.size() != entries.size()) {
    throw ShapeError(fmt::format("adam: {} gradients for {} parameters", grads.size(),
                                 entries.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [name, tensor] = entries[i];
    if (grads[i].shape() != tensor.shape()) {
      throw ShapeError(fmt::format("adam: gradient for {} has shape {}, expected {}", name,
                                   diff::ShapeString(grads[i].shape()),
                                   diff::ShapeString(tensor.shape())));
    }
    const auto g = grads[i].data();
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!std::isfinite(g[j])) {
        throw NumericalError(
            fmt::format("adam: non-finite gradient {} in {}[{}]", g[j], name, j));
      }
    }
  }
  if (m_.empty()) {
    for (const auto& [name, tensor] : entries) {
      m_.emplace_back(tensor.size(), 0.0);
      v_.emplace_back(tensor.size(), 0.0);
    }
  } else if (m_.size() != entries.size()) {
    throw ShapeError("adam: parameter set changed between steps");
  }

  ++steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto w = entries[i].second.mutable_data();
    const auto g = grads[i].data();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      w[j] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace addrl::train
