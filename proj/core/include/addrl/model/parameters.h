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

#ifndef ADDRL_MODEL_PARAMETERS_H_
#define ADDRL_MODEL_PARAMETERS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "addrl/diff/tensor.h"
#include "addrl/model/config.h"

namespace addrl::model {

// Stable tensor names used for checkpoints and regularisation.
namespace param {
inline constexpr std::string_view kUserEmbedding = "user_embedding";
inline constexpr std::string_view kItemEmbedding = "item_embedding";
inline constexpr std::string_view kTextualWeight = "proj.textual.weight";
inline constexpr std::string_view kTextualBias = "proj.textual.bias";
inline constexpr std::string_view kVisualWeight = "proj.visual.weight";
inline constexpr std::string_view kVisualBias = "proj.visual.bias";
inline constexpr std::string_view kAttentionW1 = "attention.w1";
inline constexpr std::string_view kAttentionBias = "attention.bias";
inline constexpr std::string_view kAttentionW2 = "attention.w2";

// Sources classified by the intra-modality heads, in loss order.
inline constexpr std::string_view kIntraSources[] = {"user", "item", "textual",
                                                    "visual"};
std::string IntraWeight(std::string_view source);
std::string IntraBias(std::string_view source);
std::string LowWeight(int attribute);
std::string LowBias(int attribute);
}  // namespace param

// Every trainable tensor, in a fixed insertion order.
class ParameterStore {
 public:
  // Xavier-uniform weights and embeddings, zero biases. Each tensor draws
  // from its own seed stream, so adding a tensor never shifts the others.
  static ParameterStore Initialize(const ModelConfig& config, int num_users,
                                   int num_items, std::uint64_t seed);

  void Add(std::string name, diff::Tensor tensor);
  bool Contains(std::string_view name) const;
  // Throws ConfigError for unknown names.
  diff::Tensor& Get(std::string_view name);
  const diff::Tensor& Get(std::string_view name) const;

  std::vector<std::pair<std::string, diff::Tensor>>& entries() { return entries_; }
  const std::vector<std::pair<std::string, diff::Tensor>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  std::size_t num_scalars() const;

  int num_users() const;
  int num_items() const;

  void SetRequiresGrad(bool value);
  // Throws ConfigError when a tensor is missing or mis-shaped for `config`.
  void ValidateAgainst(const ModelConfig& config) const;
  // True when the tensor is an ID embedding table.
  static bool IsEmbedding(std::string_view name);

  friend bool operator==(const ParameterStore& a, const ParameterStore& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<std::pair<std::string, diff::Tensor>> entries_;
};

}  // namespace addrl::model

#endif  // ADDRL_MODEL_PARAMETERS_H_
