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

#include "addrl/data/attributes.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::data {

int Attribute::FindValue(std::string_view value) const {
  auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

std::vector<int> AttributeSchema::sizes() const {
  std::vector<int> out;
  for (const Attribute& a : attributes) out.push_back(a.num_values());
  return out;
}

int AttributeSchema::Find(std::string_view name) const {
  for (int k = 0; k < num_attributes(); ++k) {
    if (attributes[k].name == name) return k;
  }
  return -1;
}

std::string_view AttributeSchema::ChunkName(int chunk) const {
  if (chunk < num_attributes()) return attributes[chunk].name;
  return kResidualName;
}

void AttributeSchema::Validate() const {
  if (attributes.empty()) throw DataError("attribute schema has no attributes");
  for (const Attribute& a : attributes) {
    if (a.values.empty()) {
      throw DataError(fmt::format("attribute '{}' has no values", a.name));
    }
    std::set<std::string> unique(a.values.begin(), a.values.end());
    if (unique.size() != a.values.size()) {
      throw DataError(fmt::format("attribute '{}' has duplicate value names", a.name));
    }
  }
}

AttributeLabels::AttributeLabels(int num_items, int num_attributes)
    : num_items_(num_items),
      num_attributes_(num_attributes),
      labels_(static_cast<std::size_t>(num_items) * num_attributes, 0) {}

std::vector<int> AttributeLabels::Column(int attribute) const {
  std::vector<int> out(num_items_);
  for (int i = 0; i < num_items_; ++i) out[i] = at(i, attribute);
  return out;
}

AttributeData LoadAttributes(const std::filesystem::path& path,
                             const IdMap& items) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));

  constexpr int kMissing = -1;
  AttributeSchema schema;
  // Per item, per attribute (grown as attributes appear).
  std::vector<std::vector<int>> raw(items.size());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(fmt::format("{}:{}: expected `item<TAB>attr=value;...`",
                                  path.string(), line_no));
    }
    const int item = items.Find(view.substr(0, tab));
    std::string_view rest = view.substr(tab + 1);
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      std::string_view field = rest.substr(0, semi);
      rest = semi == std::string_view::npos ? std::string_view{}
                                            : rest.substr(semi + 1);
      if (field.empty()) continue;
      const auto eq = field.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == field.size()) {
        throw DataError(fmt::format("{}:{}: malformed attribute field '{}'",
                                    path.string(), line_no, field));
      }
      const std::string_view name = field.substr(0, eq);
      const std::string_view value = field.substr(eq + 1);
      int k = schema.Find(name);
      if (k < 0) {
        schema.attributes.push_back(Attribute{std::string(name), {}});
        k = schema.num_attributes() - 1;
      }
      Attribute& attr = schema.attributes[k];
      int v = attr.FindValue(value);
      if (v < 0) {
        attr.values.emplace_back(value);
        v = attr.num_values() - 1;
      }
      if (item < 0) continue;
      auto& row = raw[item];
      if (static_cast<int>(row.size()) <= k) row.resize(k + 1, kMissing);
      row[k] = v;
    }
  }
  if (schema.attributes.empty()) {
    throw DataError(fmt::format("{}: no attributes found", path.string()));
  }

  AttributeLabels labels(items.size(), schema.num_attributes());
  for (int i = 0; i < items.size(); ++i) {
    for (int k = 0; k < schema.num_attributes(); ++k) {
      int v = k < static_cast<int>(raw[i].size()) ? raw[i][k] : kMissing;
      if (v == kMissing) {
        Attribute& attr = schema.attributes[k];
        v = attr.FindValue(kUnknownValue);
        if (v < 0) {
          attr.values.emplace_back(kUnknownValue);
          v = attr.num_values() - 1;
        }
      }
      labels.set(i, k, v);
    }
  }
  schema.Validate();
  return AttributeData{std::move(schema), std::move(labels)};
}

void SaveAttributes(const AttributeData& data, const IdMap& items,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  const AttributeSchema& schema = data.schema;
  for (int i = 0; i < items.size(); ++i) {
    out << items.token(i) << '\t';
    for (int k = 0; k < schema.num_attributes(); ++k) {
      if (k > 0) out << ';';
      const Attribute& a = schema.attributes[k];
      out << a.name << '=' << a.values[data.labels.at(i, k)];
    }
    out << '\n';
  }
}

std::vector<int> DiscretizeLevels(std::span<const double> values, int n_levels) {
  if (n_levels < 2) {
    throw ConfigError(fmt::format("n_levels must be >= 2, got {}", n_levels));
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isnan(values[i])) order.push_back(i);
  }
  if (order.empty()) throw DataError("cannot discretize: every value is missing");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  const std::size_t n = order.size();
  std::vector<int> levels(values.size(), n_levels);
  std::size_t first_of_run = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (pos > 0 && values[order[pos]] != values[order[pos - 1]]) first_of_run = pos;
    levels[order[pos]] =
        static_cast<int>(first_of_run * static_cast<std::size_t>(n_levels) / n);
  }
  return levels;
}

}  // namespace addrl::data
