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

#include "addrl/model/parameters.h"

#include <fmt/format.h>

#include "addrl/diff/init.h"
#include "addrl/error.h"
#include "addrl/random.h"

namespace addrl::model {

namespace param {
std::string IntraWeight(std::string_view source) {
  return fmt::format("intra.{}.weight", source);
}
std::string IntraBias(std::string_view source) {
  return fmt::format("intra.{}.bias", source);
}
std::string LowWeight(int attribute) { return fmt::format("low.{}.weight", attribute); }
std::string LowBias(int attribute) { return fmt::format("low.{}.bias", attribute); }
}  // namespace param

namespace {

using diff::Shape;
using diff::Tensor;

// Expected (name, shape, is_bias) layout for a config.
struct Slot {
  std::string name;
  Shape shape;
  bool bias;
};

std::vector<Slot> Layout(const ModelConfig& c, int num_users, int num_items) {
  const auto d = static_cast<std::size_t>(c.dim());
  const auto cd = static_cast<std::size_t>(c.chunk_dim);
  const auto nc = static_cast<std::size_t>(c.num_chunks());
  std::vector<Slot> slots = {
      {std::string(param::kUserEmbedding), {static_cast<std::size_t>(num_users), d}, false},
      {std::string(param::kItemEmbedding), {static_cast<std::size_t>(num_items), d}, false},
      {std::string(param::kTextualWeight), {d, static_cast<std::size_t>(c.d0_textual)}, false},
      {std::string(param::kTextualBias), {d}, true},
      {std::string(param::kVisualWeight), {d, static_cast<std::size_t>(c.d0_visual)}, false},
      {std::string(param::kVisualBias), {d}, true},
  };
  for (std::string_view src : param::kIntraSources) {
    slots.push_back({param::IntraWeight(src), {nc, cd}, false});
    slots.push_back({param::IntraBias(src), {nc}, true});
  }
  slots.push_back({std::string(param::kAttentionW1), {3, cd}, false});
  slots.push_back({std::string(param::kAttentionBias), {3}, true});
  slots.push_back({std::string(param::kAttentionW2), {3, 3}, false});
  for (int k = 0; k < c.num_attributes; ++k) {
    const auto a = static_cast<std::size_t>(c.attribute_sizes[k]);
    slots.push_back({param::LowWeight(k), {a, cd}, false});
    slots.push_back({param::LowBias(k), {a}, true});
  }
  return slots;
}

}  // namespace

ParameterStore ParameterStore::Initialize(const ModelConfig& config,
                                          int num_users, int num_items,
                                          std::uint64_t seed) {
  config.Validate();
  if (num_users < 1 || num_items < 1) {
    throw ConfigError("a model needs at least one user and one item");
  }
  ParameterStore store;
  std::uint64_t stream = 0;
  for (Slot& slot : Layout(config, num_users, num_items)) {
    const std::uint64_t tensor_seed = Mix64(seed ^ Mix64(++stream));
    Tensor t = slot.bias ? Tensor(slot.shape) : diff::XavierInit(slot.shape, tensor_seed);
    store.Add(std::move(slot.name), std::move(t));
  }
  return store;
}

void ParameterStore::Add(std::string name, diff::Tensor tensor) {
  if (Contains(name)) {
    throw ConfigError(fmt::format("duplicate parameter name '{}'", name));
  }
  entries_.emplace_back(std::move(name), std::move(tensor));
}

bool ParameterStore::Contains(std::string_view name) const {
  for (const auto& [n, t] : entries_) {
    if (n == name) return true;
  }
  return false;
}

diff::Tensor& ParameterStore::Get(std::string_view name) {
  for (auto& [n, t] : entries_) {
    if (n == name) return t;
  }
  throw ConfigError(fmt::format("unknown parameter '{}'", name));
}

const diff::Tensor& ParameterStore::Get(std::string_view name) const {
  for (const auto& [n, t] : entries_) {
    if (n == name) return t;
  }
  throw ConfigError(fmt::format("unknown parameter '{}'", name));
}

std::size_t ParameterStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries_) n += t.size();
  return n;
}

int ParameterStore::num_users() const {
  return static_cast<int>(Get(param::kUserEmbedding).rows());
}

int ParameterStore::num_items() const {
  return static_cast<int>(Get(param::kItemEmbedding).rows());
}

void ParameterStore::SetRequiresGrad(bool value) {
  for (auto& [name, t] : entries_) t.set_requires_grad(value);
}

bool ParameterStore::IsEmbedding(std::string_view name) {
  return name == param::kUserEmbedding || name == param::kItemEmbedding;
}

void ParameterStore::ValidateAgainst(const ModelConfig& config) const {
  config.Validate();
  const auto layout = Layout(config, num_users(), num_items());
  if (layout.size() != entries_.size()) {
    throw ConfigError(fmt::format("parameter store holds {} tensors, config needs {}",
                                  entries_.size(), layout.size()));
  }
  for (const Slot& slot : layout) {
    const diff::Tensor& t = Get(slot.name);
    if (t.shape() != slot.shape) {
      throw ConfigError(fmt::format("parameter '{}' has shape {}, config needs {}",
                                    slot.name, diff::ShapeString(t.shape()),
                                    diff::ShapeString(slot.shape)));
    }
  }
}

}  // namespace addrl::model
