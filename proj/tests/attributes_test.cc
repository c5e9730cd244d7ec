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
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "addrl/random.h"
#include "test_util.h"

namespace addrl::data {
namespace {

IdMap Items(std::initializer_list<const char*> tokens) {
  IdMap m;
  for (const char* t : tokens) m.Intern(t);
  return m;
}

TEST(AttributesTest, LoadInfersSchemaInFirstAppearanceOrder) {
  const auto path = testing::TempDir("attrs_load") / "a.tsv";
  std::ofstream(path) << "i2\tcolor=red;size=S\n"
                         "i1\tcolor=blue;size=L\n"
                         "i3\tsize=S\n"
                         "ghost\tcolor=green\n";
  AttributeData d = LoadAttributes(path, Items({"i1", "i2", "i3"}));
  ASSERT_EQ(d.schema.num_attributes(), 2);
  EXPECT_EQ(d.schema.attributes[0].name, "color");
  EXPECT_EQ(d.schema.attributes[0].values,
            (std::vector<std::string>{"red", "blue", "green", "unknown"}));
  EXPECT_EQ(d.schema.attributes[1].values, (std::vector<std::string>{"S", "L"}));
  EXPECT_EQ(d.labels.at(0, 0), 1);
  EXPECT_EQ(d.labels.at(1, 0), 0);
  EXPECT_EQ(d.labels.at(2, 0), 3);  // missing -> unknown
  EXPECT_EQ(d.labels.at(2, 1), 0);
  EXPECT_EQ(d.schema.ChunkName(1), "size");
  EXPECT_EQ(d.schema.ChunkName(2), "others");
}

TEST(AttributesTest, MalformedFieldThrows) {
  const auto path = testing::TempDir("attrs_bad") / "a.tsv";
  std::ofstream(path) << "i1\tcolor\n";
  EXPECT_THROW(LoadAttributes(path, Items({"i1"})), DataError);
  std::ofstream(path) << "i1 color=red\n";
  EXPECT_THROW(LoadAttributes(path, Items({"i1"})), DataError);
  std::ofstream(path) << "";
  EXPECT_THROW(LoadAttributes(path, Items({"i1"})), DataError);
}

TEST(AttributesTest, SaveLoadRoundTrip) {
  const IdMap items = Items({"a", "b", "c"});
  AttributeData d;
  d.schema.attributes = {{"k0", {"x", "y"}}, {"k1", {"p", "q", "r"}}};
  d.labels = AttributeLabels(3, 2);
  d.labels.set(0, 0, 1);
  d.labels.set(1, 1, 2);
  d.labels.set(2, 1, 1);
  d.labels.set(2, 0, 0);
  const auto path = testing::TempDir("attrs_rt") / "a.tsv";
  SaveAttributes(d, items, path);
  AttributeData r = LoadAttributes(path, items);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k)
      EXPECT_EQ(r.schema.attributes[k].values[r.labels.at(i, k)],
                d.schema.attributes[k].values[d.labels.at(i, k)]);
}

TEST(AttributesTest, SchemaValidate) {
  AttributeSchema s;
  EXPECT_THROW(s.Validate(), DataError);
  s.attributes = {{"a", {}}};
  EXPECT_THROW(s.Validate(), DataError);
  s.attributes = {{"a", {"x", "x"}}};
  EXPECT_THROW(s.Validate(), DataError);
  s.attributes = {{"a", {"x"}}};
  EXPECT_NO_THROW(s.Validate());
  EXPECT_EQ(s.sizes(), std::vector<int>{1});
}

TEST(DiscretizeTest, OnePerBin) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_EQ(DiscretizeLevels(v, 5), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(DiscretizeTest, PermutedInputKeepsLevelsOfValues) {
  const std::vector<double> v = {5, 3, 1, 4, 2};
  EXPECT_EQ(DiscretizeLevels(v, 5), (std::vector<int>{4, 2, 0, 3, 1}));
}

TEST(DiscretizeTest, AllEqualCollapseToZero) {
  const std::vector<double> v(9, 7.5);
  EXPECT_EQ(DiscretizeLevels(v, 5), std::vector<int>(9, 0));
}

TEST(DiscretizeTest, MissingGoesToUnknownLevel) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> v = {nan, 1.0, 2.0};
  const auto l = DiscretizeLevels(v, 2);
  EXPECT_EQ(l[0], 2);
  EXPECT_EQ(l[1], 0);
  EXPECT_EQ(l[2], 1);
  EXPECT_THROW(DiscretizeLevels(std::vector<double>{nan, nan}, 3), DataError);
  EXPECT_THROW(DiscretizeLevels(v, 1), ConfigError);
}

// Oracle: the level of a value is floor(n_levels * rank / n) where rank is the
// count of strictly smaller values.
std::vector<int> QuantileOracle(const std::vector<double>& v, int n_levels) {
  std::vector<int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t below = 0;
    for (double w : v) below += w < v[i];
    out[i] = static_cast<int>(below * n_levels / v.size());
  }
  return out;
}

TEST(DiscretizeTest, PropertyMatchesOracleMonotoneAndBalanced) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CounterRng rng(seed, {0xd1});
    const int n = 1 + static_cast<int>(rng.below(40));
    const int levels = 2 + static_cast<int>(rng.below(6));
    const int distinct = 1 + static_cast<int>(rng.below(12));
    std::vector<double> v(n);
    for (double& x : v) x = static_cast<double>(rng.below(distinct));
    const auto got = DiscretizeLevels(v, levels);
    ASSERT_EQ(got, QuantileOracle(v, levels)) << "seed " << seed;
    for (int a = 0; a < n; ++a) {
      ASSERT_LT(got[a], levels);
      for (int b = 0; b < n; ++b)
        if (v[a] <= v[b]) {
          ASSERT_LE(got[a], got[b]);
        }
    }
    if (distinct >= n) {
      // All-distinct inputs fill bins within one of n / levels.
      std::vector<int> count(levels, 0);
      std::vector<double> sorted = v;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      for (int l : got) ++count[l];
      const auto [lo, hi] = std::minmax_element(count.begin(), count.end());
      EXPECT_LE(*hi - *lo, 1) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace addrl::data
