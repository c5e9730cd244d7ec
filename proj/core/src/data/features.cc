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

#include "addrl/data/features.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::data {

std::string_view ModalityName(Modality m) {
  return m == Modality::kTextual ? "textual" : "visual";
}

FeatureTable LoadFeatures(const std::filesystem::path& path, Modality modality,
                          const IdMap& items) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  const std::string src = path.string();

  std::string line;
  if (!std::getline(in, line)) throw DataError(fmt::format("{}: empty file", src));
  int dim = 0;
  {
    std::istringstream header(line);
    std::string label;
    if (!(header >> label >> dim) || dim <= 0) {
      throw DataError(fmt::format("{}:1: header must be `item_token <d0>`", src));
    }
  }

  std::vector<double> data(static_cast<std::size_t>(items.size()) * dim, 0.0);
  std::vector<bool> filled(items.size(), false);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(fmt::format("{}:{}: expected `item<TAB>f1,...`", src, line_no));
    }
    const int item = items.Find(view.substr(0, tab));
    if (item < 0) continue;
    std::string_view rest = view.substr(tab + 1);
    double* row = data.data() + static_cast<std::size_t>(item) * dim;
    int count = 0;
    while (true) {
      const auto comma = rest.find(',');
      std::string_view field = rest.substr(0, comma);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() ||
          !std::isfinite(value)) {
        throw DataError(fmt::format("{}:{}: bad feature value '{}'", src, line_no, field));
      }
      if (count >= dim) {
        throw DataError(fmt::format("{}:{}: more than {} values", src, line_no, dim));
      }
      row[count++] = value;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (count != dim) {
      throw DataError(fmt::format("{}:{}: expected {} values, got {}", src,
                                  line_no, dim, count));
    }
    filled[item] = true;
  }
  for (int i = 0; i < items.size(); ++i) {
    if (!filled[i]) {
      throw DataError(fmt::format("{}: no features for item '{}'", src, items.token(i)));
    }
  }
  return FeatureTable{modality,
                      diff::Tensor::Matrix(items.size(), dim, std::move(data))};
}

void SaveFeatures(const FeatureTable& table, const IdMap& items,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << "item_token " << table.dim() << '\n';
  for (int i = 0; i < table.num_items(); ++i) {
    out << items.token(i) << '\t';
    auto row = table.matrix.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << fmt::format("{:.17g}", row[j]);
    }
    out << '\n';
  }
}

}  // namespace addrl::data
