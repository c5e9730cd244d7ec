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

#include "addrl/eval/reports.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::eval {

std::string ChunkName(const data::Dataset& dataset, const model::ModelConfig& config, int k) {
  if (k < config.num_attributes) return dataset.schema().attributes.at(k).name;
  return std::string(data::kResidualName);
}

std::vector<InterpretabilityRow> InterpretabilityReport(const Scorer& scorer,
                                                        std::span<const int> users,
                                                        std::span<const int> items) {
  std::vector<InterpretabilityRow> rows;
  for (int u : users) {
    for (int i : items) {
      const model::ScoreBreakdown b = scorer.Breakdown(u, i);
      for (int k = 0; k < static_cast<int>(b.parts.size()); ++k) {
        rows.push_back({u, i, k, b.parts[k], b.parts[k] / b.total});
      }
    }
  }
  return rows;
}

void WriteInterpretabilityCsv(std::span<const InterpretabilityRow> rows,
                              const data::Dataset& dataset, const model::ModelConfig& config,
                              std::ostream& out) {
  out << "user_token,item_token,attr_name,score,share\n";
  for (const InterpretabilityRow& r : rows) {
    out << fmt::format("{},{},{},{:.17g},{:.17g}\n", dataset.interactions.users.token(r.user),
                       dataset.interactions.items.token(r.item),
                       ChunkName(dataset, config, r.chunk), r.score, r.share);
  }
}

std::vector<int> SelectCohort(const data::DatasetSplit& split, std::span<const int> item_levels,
                              int level, int size) {
  std::vector<std::pair<double, int>> shares;
  for (int u = 0; u < split.num_users(); ++u) {
    const auto& items = split.train[u];
    if (items.empty()) continue;
    int hits = 0;
    for (int i : items) hits += item_levels[i] == level;
    shares.emplace_back(static_cast<double>(hits) / static_cast<double>(items.size()), u);
  }
  std::stable_sort(shares.begin(), shares.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> cohort;
  for (std::size_t j = 0; j < shares.size() && static_cast<int>(j) < size; ++j)
    cohort.push_back(shares[j].second);
  return cohort;
}

ControllabilityTable ControllabilityReport(const Scorer& scorer,
                                           const data::DatasetSplit& split,
                                           std::span<const int> cohort, int attribute,
                                           std::span<const int> item_levels,
                                           std::span<const std::string> level_names,
                                           std::span<const double> xis, int n) {
  if (cohort.empty()) throw ConfigError("controllability cohort is empty");
  if (static_cast<int>(item_levels.size()) != scorer.num_items()) {
    throw ShapeError(fmt::format("{} item levels for {} items", item_levels.size(),
                                 scorer.num_items()));
  }
  const int num_levels = static_cast<int>(level_names.size());
  for (int level : item_levels) {
    if (level < 0 || level >= num_levels) {
      throw DataError(fmt::format("item level {} outside [0, {})", level, num_levels));
    }
  }
  ControllabilityTable table;
  table.xis.assign(xis.begin(), xis.end());
  table.level_names.assign(level_names.begin(), level_names.end());
  std::vector<double> scores;
  for (double xi : xis) {
    std::vector<double> fractions(num_levels, 0.0);
    for (int u : cohort) {
      scorer.ScoreAllControlled(u, attribute, xi, scores);
      const auto top = TopN(scores, split.train.at(u), n);
      if (top.empty()) continue;
      std::vector<double> counts(num_levels, 0.0);
      for (const RankedItem& r : top) counts[item_levels[r.item]] += 1.0;
      for (int l = 0; l < num_levels; ++l)
        fractions[l] += counts[l] / static_cast<double>(top.size());
    }
    for (double& f : fractions) f /= static_cast<double>(cohort.size());
    table.fractions.push_back(std::move(fractions));
  }
  return table;
}

void WriteControllabilityCsv(const ControllabilityTable& table, std::ostream& out) {
  out << "xi,level_name,fraction\n";
  for (std::size_t x = 0; x < table.xis.size(); ++x) {
    for (std::size_t l = 0; l < table.level_names.size(); ++l) {
      out << fmt::format("{:g},{},{:.17g}\n", table.xis[x], table.level_names[l],
                         table.fractions[x][l]);
    }
  }
}

ExportKind ParseExportKind(std::string_view name) {
  if (name == "chunks-by-source") return ExportKind::kChunksBySource;
  if (name == "fused-by-attribute") return ExportKind::kFusedByAttribute;
  throw ConfigError(fmt::format(
      "unknown export kind '{}' (expected chunks-by-source or fused-by-attribute)", name));
}

void ExportEmbeddings(const Scorer& scorer, const data::Dataset& dataset, ExportKind kind,
                      std::ostream& out) {
  const model::ModelConfig& config = scorer.config();
  const int width = config.chunk_dim;
  out << "entity_token,source,chunk_index,attr_name,value_name";
  for (int f = 1; f <= width; ++f) out << ",f" << f;
  out << '\n';

  auto value_name = [&](int item, int k) -> std::string {
    if (item < 0 || k >= config.num_attributes) return "";
    return dataset.schema().attributes[k].values.at(dataset.labels().at(item, k));
  };
  auto emit = [&](const diff::Tensor& table, std::string_view source, bool items,
                  int chunk_limit) {
    const auto& ids = items ? dataset.interactions.items : dataset.interactions.users;
    for (int e = 0; e < static_cast<int>(table.rows()); ++e) {
      for (int k = 0; k < chunk_limit; ++k) {
        out << ids.token(e) << ',' << source << ',' << k << ','
            << ChunkName(dataset, config, k) << ',' << value_name(items ? e : -1, k);
        for (double v : table.row(e).subspan(static_cast<std::size_t>(k) * width, width)) {
          out << fmt::format(",{:.17g}", v);
        }
        out << '\n';
      }
    }
  };
  const model::ItemRepresentations& items = scorer.items();
  if (kind == ExportKind::kFusedByAttribute) {
    emit(items.fused, "fused", true, config.num_attributes);
    return;
  }
  const int chunks = config.num_chunks();
  emit(scorer.users(), "user_id", false, chunks);
  emit(items.id, "item_id", true, chunks);
  emit(items.textual, "textual", true, chunks);
  emit(items.visual, "visual", true, chunks);
  emit(items.fused, "fused", true, chunks);
}

void ExportEmbeddings(const Scorer& scorer, const data::Dataset& dataset, ExportKind kind,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
  ExportEmbeddings(scorer, dataset, kind, out);
  if (!out) throw DataError(fmt::format("{}: write failed", path.string()));
}

}  // namespace addrl::eval
