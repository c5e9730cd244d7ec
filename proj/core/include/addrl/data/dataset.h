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

#ifndef ADDRL_DATA_DATASET_H_
#define ADDRL_DATA_DATASET_H_

#include <filesystem>

#include "addrl/data/attributes.h"
#include "addrl/data/features.h"
#include "addrl/data/interactions.h"

namespace addrl::data {

// Everything the model consumes about users and items. Immutable after
// construction and safe to share read-only.
struct Dataset {
  InteractionSet interactions;
  FeatureTable textual;
  FeatureTable visual;
  AttributeData attributes;

  int num_users() const { return interactions.num_users(); }
  int num_items() const { return interactions.num_items(); }
  const AttributeSchema& schema() const { return attributes.schema; }
  const AttributeLabels& labels() const { return attributes.labels; }
};

// Standard file names inside a dataset directory.
inline constexpr const char* kInteractionsFile = "interactions.tsv";
inline constexpr const char* kTextualFile = "features_textual.txt";
inline constexpr const char* kVisualFile = "features_visual.txt";
inline constexpr const char* kAttributesFile = "attributes.tsv";
inline constexpr const char* kUserMapFile = "user_map.tsv";
inline constexpr const char* kItemMapFile = "item_map.tsv";

// Loads a dataset directory, optionally applying a k-core filter to the
// interactions before features and attributes are joined by item token.
Dataset LoadDatasetDir(const std::filesystem::path& dir, int kcore = 0);
// Writes the four data files plus the token map sidecars.
void SaveDatasetDir(const Dataset& dataset, const std::filesystem::path& dir);
void WriteTokenMaps(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace addrl::data

#endif  // ADDRL_DATA_DATASET_H_
