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

#ifndef ADDRL_EVAL_SCORER_H_
#define ADDRL_EVAL_SCORER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "addrl/data/split.h"
#include "addrl/eval/metrics.h"
#include "addrl/model/addrl_model.h"

namespace addrl::eval {

struct RankedItem {
  int item = 0;
  double score = 0.0;

  friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

// Top-n items by descending score, ties to the lower index. `excluded` must
// be sorted ascending; those items are skipped.
std::vector<RankedItem> TopN(std::span<const double> scores,
                             std::span<const int> excluded, int n);

// Cached user and fused item representations of one parameter snapshot.
class Scorer {
 public:
  Scorer(const model::AddrlModel& model, const model::ParameterStore& params);

  int num_users() const { return static_cast<int>(users_.rows()); }
  int num_items() const { return static_cast<int>(items_.fused.rows()); }
  const model::ModelConfig& config() const { return model_->config(); }
  const model::AddrlModel& model() const { return *model_; }
  const model::ItemRepresentations& items() const { return items_; }
  const diff::Tensor& users() const { return users_; }

  // Throws DataError for out-of-range ids.
  model::ScoreBreakdown Breakdown(int user, int item) const;
  double Score(int user, int item) const;
  // Totals for every item into `out` (resized).
  void ScoreAll(int user, std::vector<double>& out) const;
  // total + (xi - 1) * s_attribute for every item.
  void ScoreAllControlled(int user, int attribute, double xi,
                          std::vector<double>& out) const;

 private:
  void CheckUser(int user) const;
  // softplus(u^k . v^k) for every item and chunk, row-major (item, chunk).
  void ChunkScores(int user, std::vector<double>& out) const;

  const model::AddrlModel* model_;
  diff::Tensor users_;
  model::ItemRepresentations items_;
};

// Top-n over the user's candidates (all items minus train items).
std::vector<RankedItem> RankItems(const Scorer& scorer, const data::DatasetSplit& split,
                                  int user, int n);

enum class EvalSplit { kValidation, kTest };

// Fills `out` with one score per item for `user`.
using ScoreFn = std::function<void(int user, std::vector<double>& out)>;

// Averages recall/NDCG over users with a non-empty held-out list, for each
// cut-off in `ns`. Candidates exclude train items.
std::vector<MetricSummary> EvaluateRanking(const data::DatasetSplit& split, EvalSplit which,
                                           std::span<const int> ns, const ScoreFn& score);
MetricSummary EvaluateRanking(const data::DatasetSplit& split, EvalSplit which, int n,
                              const ScoreFn& score);

ScoreFn ModelScores(const Scorer& scorer);
// Train-set interaction counts.
ScoreFn PopularityScores(const data::DatasetSplit& split);
// Uniform scores from a per-user stream.
ScoreFn RandomScores(int num_items, std::uint64_t seed);

}  // namespace addrl::eval

#endif  // ADDRL_EVAL_SCORER_H_
