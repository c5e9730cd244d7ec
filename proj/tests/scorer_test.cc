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

#include "addrl/eval/scorer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "addrl/data/split.h"
#include "addrl/error.h"
#include "addrl/model/toy.h"
#include "test_util.h"

namespace addrl::eval {
namespace {

TEST(TopNTest, TiesGoToLowerIndexAndExclusionsAreSkipped) {
  const std::vector<double> s = {1.0, 3.0, 3.0, 0.5, 3.0, 2.0};
  const int excluded[] = {2};
  const auto top = TopN(s, excluded, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].item, 1);
  EXPECT_EQ(top[1].item, 4);
  EXPECT_EQ(top[2].item, 5);
  EXPECT_EQ(TopN(s, excluded, 100).size(), 5u);
  EXPECT_THROW(TopN(s, excluded, 0), ConfigError);
}

TEST(TopNTest, MatchesFullSortProperty) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, {0x70});
    const int items = 1 + static_cast<int>(rng.below(30));
    std::vector<double> s(items);
    for (double& x : s) x = static_cast<double>(rng.below(5));  // many ties
    std::vector<int> excluded;
    for (int i = 0; i < items; ++i)
      if (rng.below(4) == 0) excluded.push_back(i);
    const int n = 1 + static_cast<int>(rng.below(items + 2));
    std::vector<int> order;
    for (int i = 0; i < items; ++i)
      if (!std::binary_search(excluded.begin(), excluded.end(), i)) order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return s[a] > s[b] || (s[a] == s[b] && a < b); });
    order.resize(std::min<std::size_t>(order.size(), n));
    const auto top = TopN(s, excluded, n);
    ASSERT_EQ(top.size(), order.size());
    for (std::size_t r = 0; r < top.size(); ++r) {
      ASSERT_EQ(top[r].item, order[r]);
      ASSERT_EQ(top[r].score, s[order[r]]);
    }
  }
}

class ScorerTest : public ::testing::Test {
 protected:
  ScorerTest()
      : toy_(model::MakeToyProblem(5)),
        model_(toy_.config, toy_.dataset),
        scorer_(model_, toy_.params),
        split_(data::SplitDataset(toy_.dataset.interactions, 5)) {}
  model::ToyProblem toy_;
  model::AddrlModel model_;
  Scorer scorer_;
  data::DatasetSplit split_;
};

TEST_F(ScorerTest, ScoreAllAgreesWithBreakdown) {
  std::vector<double> all;
  for (int u = 0; u < scorer_.num_users(); ++u) {
    scorer_.ScoreAll(u, all);
    ASSERT_EQ(static_cast<int>(all.size()), scorer_.num_items());
    for (int i = 0; i < scorer_.num_items(); ++i) {
      const model::ScoreBreakdown b = scorer_.Breakdown(u, i);
      EXPECT_NEAR(all[i], b.total, 1e-12);
      EXPECT_EQ(scorer_.Score(u, i), b.total);
    }
  }
  EXPECT_THROW(scorer_.Breakdown(99, 0), DataError);
  EXPECT_THROW(scorer_.Breakdown(0, -1), DataError);
}

TEST_F(ScorerTest, ControlledScores) {
  std::vector<double> base, same, scaled;
  for (int u = 0; u < scorer_.num_users(); ++u) {
    scorer_.ScoreAll(u, base);
    for (int a = 0; a < toy_.config.num_attributes; ++a) {
      scorer_.ScoreAllControlled(u, a, 1.0, same);
      EXPECT_EQ(same, base);
      scorer_.ScoreAllControlled(u, a, -0.5, scaled);
      for (int i = 0; i < scorer_.num_items(); ++i) {
        const model::ScoreBreakdown b = scorer_.Breakdown(u, i);
        EXPECT_NEAR(scaled[i], base[i] - 1.5 * b.parts[a], 1e-12);
      }
    }
  }
  EXPECT_THROW(scorer_.ScoreAllControlled(0, toy_.config.num_attributes, 2.0, scaled),
               ConfigError);
}

TEST_F(ScorerTest, RankItemsIsBruteForceOrder) {
  for (int u = 0; u < split_.num_users(); ++u) {
    std::vector<std::pair<double, int>> ref;
    for (int i = 0; i < split_.num_items; ++i)
      if (!split_.InTrain(u, i)) ref.emplace_back(-scorer_.Score(u, i), i);
    std::sort(ref.begin(), ref.end());
    const auto ranked = RankItems(scorer_, split_, u, 100);
    ASSERT_EQ(ranked.size(), ref.size());
    for (std::size_t r = 0; r < ref.size(); ++r) EXPECT_EQ(ranked[r].item, ref[r].second);
  }
  EXPECT_THROW(RankItems(scorer_, split_, -1, 3), DataError);
}

TEST_F(ScorerTest, MetricsInvariantUnderMonotoneTransform) {
  const int ns[] = {1, 2, 5};
  const ScoreFn base = ModelScores(scorer_);
  const ScoreFn squashed = [&](int u, std::vector<double>& out) {
    base(u, out);
    for (double& s : out) s = std::tanh(0.1 * s) * 3.0 + 7.0;
  };
  const auto a = EvaluateRanking(split_, EvalSplit::kTest, ns, base);
  const auto b = EvaluateRanking(split_, EvalSplit::kTest, ns, squashed);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(a[j].recall, b[j].recall);
    EXPECT_EQ(a[j].ndcg, b[j].ndcg);
    EXPECT_EQ(a[j].n, ns[j]);
  }
}

TEST(EvaluateRankingTest, HandComputedSplit) {
  data::DatasetSplit split;
  split.num_items = 5;
  split.train = {{0}, {1}, {2}};
  split.validation = {{}, {}, {}};
  split.test = {{3}, {0, 4}, {}};
  // Items ranked by descending id: 4, 3, 2, 1, 0.
  const ScoreFn score = [](int, std::vector<double>& out) { out = {0, 1, 2, 3, 4}; };
  const MetricSummary m = EvaluateRanking(split, EvalSplit::kTest, 2, score);
  EXPECT_EQ(m.users_counted, 2);
  // User 0: top-2 {4,3} hits 3 at rank 2. User 1: top-2 {4,3} hits 4 at rank 1.
  EXPECT_DOUBLE_EQ(m.recall, (1.0 + 0.5) / 2);
  const double ndcg0 = 1.0 / std::log2(3.0);
  const double ndcg1 = 1.0 / (1.0 + 1.0 / std::log2(3.0));
  EXPECT_DOUBLE_EQ(m.ndcg, (ndcg0 + ndcg1) / 2);
  const MetricSummary v = EvaluateRanking(split, EvalSplit::kValidation, 2, score);
  EXPECT_EQ(v.users_counted, 0);
  EXPECT_EQ(v.recall, 0.0);
}

TEST(BaselineScoresTest, PopularityAndRandom) {
  data::DatasetSplit split;
  split.num_items = 4;
  split.train = {{0, 1}, {1}, {1, 3}};
  std::vector<double> out;
  PopularityScores(split)(0, out);
  EXPECT_EQ(out, (std::vector<double>{1, 3, 0, 1}));
  std::vector<double> r1, r2, r3;
  RandomScores(4, 9)(1, r1);
  RandomScores(4, 9)(1, r2);
  RandomScores(4, 9)(2, r3);
  EXPECT_EQ(r1, r2);
  EXPECT_NE(r1, r3);
}

}  // namespace
}  // namespace addrl::eval
