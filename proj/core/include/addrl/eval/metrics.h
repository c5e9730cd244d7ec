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

#ifndef ADDRL_EVAL_METRICS_H_
#define ADDRL_EVAL_METRICS_H_

#include <span>

namespace addrl::eval {

// |top-n ∩ relevant| / |relevant|; 0 when `relevant` is empty.
double RecallAtN(std::span<const int> ranking, std::span<const int> relevant, int n);

// Binary-relevance NDCG with a log2(rank + 1) discount, normalised by the
// ideal DCG of min(n, |relevant|) hits.
double NdcgAtN(std::span<const int> ranking, std::span<const int> relevant, int n);

struct MetricSummary {
  int n = 0;
  double recall = 0.0;
  double ndcg = 0.0;
  // Users with a non-empty relevant set; the others are not averaged.
  int users_counted = 0;
};

}  // namespace addrl::eval

#endif  // ADDRL_EVAL_METRICS_H_
