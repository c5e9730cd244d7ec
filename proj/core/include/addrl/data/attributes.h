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

#ifndef ADDRL_DATA_ATTRIBUTES_H_
#define ADDRL_DATA_ATTRIBUTES_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrl/data/interactions.h"

namespace addrl::data {

inline constexpr std::string_view kUnknownValue = "unknown";
// Name reported for the residual chunk that carries no attribute.
inline constexpr std::string_view kResidualName = "others";

struct Attribute {
  std::string name;
  std::vector<std::string> values;

  int num_values() const { return static_cast<int>(values.size()); }
  int FindValue(std::string_view value) const;
};

struct AttributeSchema {
  std::vector<Attribute> attributes;
  bool residual_chunk = true;

  int num_attributes() const { return static_cast<int>(attributes.size()); }
  std::vector<int> sizes() const;
  // -1 when absent.
  int Find(std::string_view name) const;
  // Name of chunk k, `others` for the residual chunk.
  std::string_view ChunkName(int chunk) const;
  // Throws DataError unless K >= 1, every A_k >= 1 and value names are unique.
  void Validate() const;
};

// One value index per (item, attribute), stored item-major.
class AttributeLabels {
 public:
  AttributeLabels() = default;
  AttributeLabels(int num_items, int num_attributes);

  int num_items() const { return num_items_; }
  int num_attributes() const { return num_attributes_; }
  int at(int item, int attribute) const {
    return labels_[static_cast<std::size_t>(item) * num_attributes_ + attribute];
  }
  void set(int item, int attribute, int value) {
    labels_[static_cast<std::size_t>(item) * num_attributes_ + attribute] = value;
  }
  // Labels of one attribute across all items.
  std::vector<int> Column(int attribute) const;

 private:
  int num_items_ = 0;
  int num_attributes_ = 0;
  std::vector<int> labels_;
};

struct AttributeData {
  AttributeSchema schema;
  AttributeLabels labels;
};

// Reads `item<TAB>attr=value;attr=value` lines. Attribute and value order
// follow first appearance. Items listed in `items` but missing from the file,
// or missing an attribute, get the `unknown` value. Lines for items outside
// `items` are ignored.
AttributeData LoadAttributes(const std::filesystem::path& path,
                             const IdMap& items);
void SaveAttributes(const AttributeData& data, const IdMap& items,
                    const std::filesystem::path& path);

// Quantile binning into n_levels bins. A value's level is
// floor(count_below * n_levels / n_finite), where count_below is the number of
// finite values strictly smaller; equal values therefore share a level. NaN
// marks a missing value and maps to the extra level n_levels.
std::vector<int> DiscretizeLevels(std::span<const double> values, int n_levels);

}  // namespace addrl::data

#endif  // ADDRL_DATA_ATTRIBUTES_H_
