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

#include "addrl/data/split.h"

#include <algorithm>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "addrl/random.h"

namespace addrl::data {
namespace {

// Users with the given interaction counts over a catalog of num_items items.
InteractionSet MakeSet(const std::vector<int>& counts, int num_items, std::uint64_t seed) {
  InteractionSet s;
  for (int i = 0; i < num_items; ++i) s.items.Intern("i" + std::to_string(i));
  CounterRng rng(seed, {0x5e7});
  for (std::size_t u = 0; u < counts.size(); ++u) {
    std::vector<int> all(num_items);
    for (int i = 0; i < num_items; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    for (int j = 0; j < counts[u]; ++j)
      s.Add("u" + std::to_string(u), "i" + std::to_string(all[j]));
  }
  return s;
}

TEST(SplitTest, RoundingExamples) {
  InteractionSet s = MakeSet({10, 1, 5}, 20, 1);
  DatasetSplit sp = SplitDataset(s, 3);
  EXPECT_EQ(sp.test[0].size(), 2u);
  EXPECT_EQ(sp.train[0].size() + sp.validation[0].size(), 8u);
  EXPECT_EQ(sp.test[1].size(), 0u);
  EXPECT_EQ(sp.train[1].size(), 1u);
  EXPECT_EQ(sp.test[2].size(), 1u);
  EXPECT_EQ(sp.train[2].size() + sp.validation[2].size(), 4u);
}

TEST(SplitTest, PropertyPartitionAndCounts) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CounterRng rng(seed, {0x9a});
    const int users = 1 + static_cast<int>(rng.below(12));
    const int items = 3 + static_cast<int>(rng.below(25));
    std::vector<int> counts(users);
    for (int& c : counts) c = 1 + static_cast<int>(rng.below(items));
    InteractionSet s = MakeSet(counts, items, seed);
    DatasetSplit sp = SplitDataset(s, seed * 7 + 1);
    const auto by_user = s.ByUser();
    std::size_t pool = 0, val = 0;
    for (int u = 0; u < users; ++u) {
      const std::size_t n = by_user[u].size();
      std::multiset<int> got;
      got.insert(sp.train[u].begin(), sp.train[u].end());
      got.insert(sp.validation[u].begin(), sp.validation[u].end());
      got.insert(sp.test[u].begin(), sp.test[u].end());
      ASSERT_EQ(got, std::multiset<int>(by_user[u].begin(), by_user[u].end()));
      ASSERT_GE(sp.train[u].size(), 1u);
      const std::size_t ceil_test = (2 * n + 9) / 10;
      ASSERT_EQ(sp.test[u].size(), std::min(ceil_test, n - 1));
      ASSERT_TRUE(std::is_sorted(sp.train[u].begin(), sp.train[u].end()));
      for (int i : sp.train[u]) ASSERT_TRUE(sp.InTrain(u, i));
      pool += n - sp.test[u].size();
      val += sp.validation[u].size();
    }
    // Validation takes floor(10%) of the pool unless users run out of spare items.
    ASSERT_LE(val, pool / 10);
    std::size_t spare = 0;
    for (int u = 0; u < users; ++u) spare += sp.train[u].size() - 1;
    if (val < pool / 10) {
      ASSERT_EQ(spare, 0u);
    }
  }
}

TEST(SplitTest, DeterministicUnderSeed) {
  InteractionSet s = MakeSet({7, 9, 12, 3}, 30, 5);
  DatasetSplit a = SplitDataset(s, 11), b = SplitDataset(s, 11), c = SplitDataset(s, 12);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
  EXPECT_TRUE(a.train != c.train || a.test != c.test);
}

TEST(SplitTest, CandidateEnumeratesNonTrainItems) {
  InteractionSet s = MakeSet({6, 2, 9}, 12, 2);
  DatasetSplit sp = SplitDataset(s, 4);
  for (int u = 0; u < sp.num_users(); ++u) {
    std::vector<int> expected;
    for (int i = 0; i < sp.num_items; ++i)
      if (!sp.InTrain(u, i)) expected.push_back(i);
    ASSERT_EQ(sp.NumCandidates(u), static_cast<int>(expected.size()));
    for (int r = 0; r < sp.NumCandidates(u); ++r) EXPECT_EQ(sp.Candidate(u, r), expected[r]);
  }
}

TEST(NegativesTest, OnlyCandidate) {
  DatasetSplit sp;
  sp.num_items = 3;
  sp.train = {{0, 1}};
  sp.validation = {{}};
  sp.test = {{}};
  EXPECT_EQ(SampleNegatives(sp, 0, 2, 9, 0), (std::vector<int>{2, 2}));
}

TEST(NegativesTest, ErrorsAndDeterminism) {
  DatasetSplit sp;
  sp.num_items = 2;
  sp.train = {{0, 1}, {1}};
  sp.validation = {{}, {}};
  sp.test = {{}, {}};
  EXPECT_THROW(SampleNegatives(sp, 0, 1, 1, 0), DataError);
  EXPECT_THROW(SampleNegatives(sp, 1, 0, 1, 0), ConfigError);
  EXPECT_THROW(SampleNegatives(sp, 5, 1, 1, 0), DataError);
  EXPECT_EQ(SampleNegatives(sp, 1, 4, 3, 7), SampleNegatives(sp, 1, 4, 3, 7));
}

TEST(NegativesTest, NeverTrainAndUniform) {
  DatasetSplit sp;
  sp.num_items = 10;
  sp.train = {{1, 4, 5, 8}};
  sp.validation = {{}};
  sp.test = {{}};
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int step = 0; step < draws / 4; ++step) {
    for (int i : SampleNegatives(sp, 0, 4, 21, step)) {
      ASSERT_FALSE(sp.InTrain(0, i));
      ++counts[i];
    }
  }
  const double expected = draws / 6.0;
  for (int i : {0, 2, 3, 6, 7, 9}) EXPECT_NEAR(counts[i], expected, 0.02 * expected);
  double chi2 = 0.0;
  for (int i : {0, 2, 3, 6, 7, 9})
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  EXPECT_LT(chi2, 20.52);  // 0.999 quantile, 5 degrees of freedom.
}

}  // namespace
}  // namespace addrl::data
