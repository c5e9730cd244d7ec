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

#ifndef ADDRL_DATA_FEATURES_H_
#define ADDRL_DATA_FEATURES_H_

#include <filesystem>
#include <string_view>

#include "addrl/data/interactions.h"
#include "addrl/diff/tensor.h"

namespace addrl::data {

enum class Modality { kTextual, kVisual };

std::string_view ModalityName(Modality m);

// Precomputed per-item raw features; row i belongs to item index i.
struct FeatureTable {
  Modality modality = Modality::kTextual;
  diff::Tensor matrix;

  int num_items() const { return static_cast<int>(matrix.rows()); }
  int dim() const { return static_cast<int>(matrix.cols()); }
};

// File layout: a header line `<label> <d0>`, then one
// `item<TAB>f1,f2,...,fd0` line per item. Every item in `items` needs a row;
// rows for unknown items are ignored. Non-finite values are rejected.
FeatureTable LoadFeatures(const std::filesystem::path& path, Modality modality,
                          const IdMap& items);
void SaveFeatures(const FeatureTable& table, const IdMap& items,
                  const std::filesystem::path& path);

}  // namespace addrl::data

#endif  // ADDRL_DATA_FEATURES_H_
