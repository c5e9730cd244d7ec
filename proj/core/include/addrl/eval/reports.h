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

#ifndef ADDRL_EVAL_REPORTS_H_
#define ADDRL_EVAL_REPORTS_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrl/data/dataset.h"
#include "addrl/data/split.h"
#include "addrl/eval/scorer.h"

namespace addrl::eval {

// Name of chunk k under `config`: the attribute name, or `others`.
std::string ChunkName(const data::Dataset& dataset, const model::ModelConfig& config, int k);

struct InterpretabilityRow {
  int user = 0;
  int item = 0;
  int chunk = 0;
  double score = 0.0;
  // score / sum of the pair's chunk scores.
  double share = 0.0;
};

// One row per (user, item, chunk), users outermost. Throws DataError for
// unknown indices.
std::vector<InterpretabilityRow> InterpretabilityReport(const Scorer& scorer,
                                                        std::span<const int> users,
                                                        std::span<const int> items);
void WriteInterpretabilityCsv(std::span<const InterpretabilityRow> rows,
                              const data::Dataset& dataset, const model::ModelConfig& config,
                              std::ostream& out);

// Up to `size` users with the highest share of training items whose level
// equals `level`, ties to the lower user index. Users without training
// items are skipped.
std::vector<int> SelectCohort(const data::DatasetSplit& split, std::span<const int> item_levels,
                              int level, int size);

struct ControllabilityTable {
  std::vector<double> xis;
  std::vector<std::string> level_names;
  // fractions[x][l]: cohort mean share of top-n items at level l under xis[x].
  std::vector<std::vector<double>> fractions;
};

// Re-ranks each cohort user's candidates by total + (xi - 1) * s_attribute.
ControllabilityTable ControllabilityReport(const Scorer& scorer,
                                           const data::DatasetSplit& split,
                                           std::span<const int> cohort, int attribute,
                                           std::span<const int> item_levels,
                                           std::span<const std::string> level_names,
                                           std::span<const double> xis, int n);
void WriteControllabilityCsv(const ControllabilityTable& table, std::ostream& out);

enum class ExportKind { kChunksBySource, kFusedByAttribute };
// Accepts chunks-by-source and fused-by-attribute.
ExportKind ParseExportKind(std::string_view name);

// CSV `entity_token,source,chunk_index,attr_name,value_name,f1..`, values
// printed with 17 significant digits. chunks-by-source covers user_id,
// item_id, textual, visual and fused for every chunk; fused-by-attribute
// covers the K attribute chunks of the fused item vectors.
void ExportEmbeddings(const Scorer& scorer, const data::Dataset& dataset, ExportKind kind,
                      std::ostream& out);
void ExportEmbeddings(const Scorer& scorer, const data::Dataset& dataset, ExportKind kind,
                      const std::filesystem::path& path);

}  // namespace addrl::eval

#endif  // ADDRL_EVAL_REPORTS_H_
