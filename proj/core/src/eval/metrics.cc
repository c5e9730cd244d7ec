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

#include "addrl/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::eval {
namespace {

bool Contains(std::span<const int> set, int item) {
  return std::find(set.begin(), set.end(), item) != set.end();
}

void CheckN(int n) {
  if (n < 1) throw ConfigError(fmt::format("metric cut-off n must be >= 1, got {}", n));
}

}  // namespace

double RecallAtN(std::span<const int> ranking, std::span<const int> relevant, int n) {
  CheckN(n);
  if (relevant.empty()) return 0.0;
  const std::size_t depth = std::min<std::size_t>(ranking.size(), n);
  int hits = 0;
  for (std::size_t r = 0; r < depth; ++r) hits += Contains(relevant, ranking[r]);
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

double NdcgAtN(std::span<const int> ranking, std::span<const int> relevant, int n) {
  CheckN(n);
  if (relevant.empty()) return 0.0;
  const std::size_t depth = std::min<std::size_t>(ranking.size(), n);
  double dcg = 0.0;
  for (std::size_t r = 0; r < depth; ++r) {
    if (Contains(relevant, ranking[r])) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  const std::size_t ideal_hits = std::min<std::size_t>(relevant.size(), n);
  double idcg = 0.0;
  for (std::size_t r = 0; r < ideal_hits; ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  return dcg / idcg;
}

}  // namespace addrl::eval
