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

#include "addrl/model/config.h"

#include <cmath>

#include <fmt/format.h>

#include "addrl/data/dataset.h"
#include "addrl/error.h"

namespace addrl::model {

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kRelu:
      return "relu";
    case Activation::kIdentity:
      return "identity";
  }
  return "tanh";
}

Activation ParseActivation(std::string_view name) {
  for (Activation a : {Activation::kTanh, Activation::kSigmoid, Activation::kRelu,
                       Activation::kIdentity}) {
    if (ActivationName(a) == name) return a;
  }
  throw ConfigError(fmt::format(
      "unknown activation '{}' (expected tanh, sigmoid, relu or identity)", name));
}

void ModelConfig::Validate() const {
  if (num_attributes < 1) throw ConfigError("num_attributes must be >= 1");
  if (static_cast<int>(attribute_sizes.size()) != num_attributes) {
    throw ConfigError(fmt::format("attribute_sizes has {} entries, expected {}",
                                  attribute_sizes.size(), num_attributes));
  }
  for (int a : attribute_sizes) {
    if (a < 1) throw ConfigError("every attribute needs at least one value");
  }
  if (chunk_dim < 1) throw ConfigError("chunk_dim must be >= 1");
  if (d0_textual < 1 || d0_visual < 1) {
    throw ConfigError("raw feature sizes must be >= 1");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError(fmt::format("temperature must be > 0, got {}", temperature));
  }
  for (auto [name, v] : {std::pair{"alpha", alpha}, std::pair{"beta", beta},
                         std::pair{"gamma", gamma}, std::pair{"l2", l2},
                         std::pair{"weight_decay", weight_decay}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError(fmt::format("{} must be a finite non-negative number, got {}",
                                    name, v));
    }
  }
}

ModelConfig ConfigForDataset(const ModelConfig& base, const data::Dataset& dataset) {
  ModelConfig c = base;
  c.num_attributes = dataset.schema().num_attributes();
  c.attribute_sizes = dataset.schema().sizes();
  c.d0_textual = dataset.textual.dim();
  c.d0_visual = dataset.visual.dim();
  c.residual_chunk = base.residual_chunk;
  c.Validate();
  return c;
}

}  // namespace addrl::model
