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

#include "addrl/data/dataset.h"

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::data {

Dataset LoadDatasetDir(const std::filesystem::path& dir, int kcore) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError(fmt::format("dataset directory {} does not exist", dir.string()));
  }
  Dataset ds;
  ds.interactions = KCoreFilter(LoadInteractions(dir / kInteractionsFile), kcore);
  const IdMap& items = ds.interactions.items;
  ds.textual = LoadFeatures(dir / kTextualFile, Modality::kTextual, items);
  ds.visual = LoadFeatures(dir / kVisualFile, Modality::kVisual, items);
  ds.attributes = LoadAttributes(dir / kAttributesFile, items);
  return ds;
}

void WriteTokenMaps(const Dataset& dataset, const std::filesystem::path& dir) {
  WriteIdMap(dataset.interactions.users, dir / kUserMapFile);
  WriteIdMap(dataset.interactions.items, dir / kItemMapFile);
}

void SaveDatasetDir(const Dataset& dataset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }
  const IdMap& items = dataset.interactions.items;
  SaveInteractions(dataset.interactions, dir / kInteractionsFile);
  SaveFeatures(dataset.textual, items, dir / kTextualFile);
  SaveFeatures(dataset.visual, items, dir / kVisualFile);
  SaveAttributes(dataset.attributes, items, dir / kAttributesFile);
  WriteTokenMaps(dataset, dir);
}

}  // namespace addrl::data
