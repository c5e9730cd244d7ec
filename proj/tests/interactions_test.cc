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

#include "addrl/data/interactions.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "addrl/random.h"
#include "test_util.h"

namespace addrl::data {
namespace {

InteractionSet Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseInteractions(in, "inline");
}

TEST(InteractionsTest, TwoLines) {
  InteractionSet s = Parse("u1\ti1\nu1\ti2\n");
  EXPECT_EQ(s.num_users(), 1);
  EXPECT_EQ(s.num_items(), 2);
  EXPECT_EQ(s.size(), 2u);
}

TEST(InteractionsTest, DuplicatesCollapse) {
  InteractionSet s = Parse("u1\ti1\nu1\ti1\r\n\nu2\ti1\n");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.num_users(), 2);
  EXPECT_EQ(s.num_items(), 1);
}

TEST(InteractionsTest, FirstAppearanceOrder) {
  InteractionSet s = Parse("b\ty\na\tx\nb\tx\n");
  EXPECT_EQ(s.users.token(0), "b");
  EXPECT_EQ(s.users.token(1), "a");
  EXPECT_EQ(s.items.token(0), "y");
  EXPECT_EQ(s.items.token(1), "x");
  EXPECT_EQ(s.users.Find("a"), 1);
  EXPECT_EQ(s.users.Find("zzz"), -1);
}

TEST(InteractionsTest, MalformedLineNamesLine) {
  try {
    Parse("u1\ti1\nbroken line\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Parse("u\ti\textra\n"), DataError);
  EXPECT_THROW(Parse("\ti\n"), DataError);
}

TEST(InteractionsTest, EmptyInputThrows) {
  EXPECT_THROW(Parse(""), DataError);
  EXPECT_THROW(Parse("\n\n"), DataError);
}

TEST(InteractionsTest, MissingFileThrows) {
  EXPECT_THROW(LoadInteractions("/nonexistent/addrl/file.tsv"), DataError);
}

TEST(InteractionsTest, SaveLoadRoundTrip) {
  InteractionSet s = Parse("u1\ti1\nu2\ti2\nu1\ti3\n");
  const auto path = testing::TempDir("interactions_rt") / "x.tsv";
  SaveInteractions(s, path);
  InteractionSet t = LoadInteractions(path);
  EXPECT_EQ(t.pairs, s.pairs);
  EXPECT_EQ(t.users.tokens(), s.users.tokens());
  EXPECT_EQ(t.items.tokens(), s.items.tokens());
}

TEST(InteractionsTest, IdMapRoundTrip) {
  IdMap m;
  m.Intern("alpha");
  m.Intern("beta");
  const auto path = testing::TempDir("idmap_rt") / "map.tsv";
  WriteIdMap(m, path);
  IdMap r = ReadIdMap(path);
  EXPECT_EQ(r.tokens(), m.tokens());
  std::ofstream(path) << "1\tbeta\n";
  EXPECT_THROW(ReadIdMap(path), DataError);
}

// Brute-force k-core: repeatedly drop any pair touching a low-degree node.
std::set<std::pair<std::string, std::string>> KCoreOracle(
    std::set<std::pair<std::string, std::string>> pairs, int k) {
  while (true) {
    std::map<std::string, int> du, di;
    for (const auto& [u, i] : pairs) ++du[u], ++di[i];
    std::set<std::pair<std::string, std::string>> next;
    for (const auto& p : pairs)
      if (du[p.first] >= k && di[p.second] >= k) next.insert(p);
    if (next == pairs) return pairs;
    pairs = std::move(next);
  }
}

TEST(InteractionsTest, KCoreMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed, {0xc0});
    InteractionSet s;
    std::set<std::pair<std::string, std::string>> raw;
    for (int n = 0; n < 120; ++n) {
      const std::string u = "u" + std::to_string(rng.below(15));
      const std::string i = "i" + std::to_string(rng.below(12));
      s.Add(u, i);
      raw.emplace(u, i);
    }
    for (int k : {2, 3, 5}) {
      const auto expected = KCoreOracle(raw, k);
      if (expected.empty()) {
        EXPECT_THROW(KCoreFilter(s, k), DataError);
        continue;
      }
      InteractionSet f = KCoreFilter(s, k);
      std::set<std::pair<std::string, std::string>> got;
      for (const auto& [u, i] : f.pairs) got.emplace(f.users.token(u), f.items.token(i));
      EXPECT_EQ(got, expected) << "seed " << seed << " k " << k;
    }
  }
}

TEST(InteractionsTest, KCoreOfOneIsIdentity) {
  InteractionSet s = Parse("a\tx\nb\ty\n");
  EXPECT_EQ(KCoreFilter(s, 0).pairs, s.pairs);
  EXPECT_EQ(KCoreFilter(s, 1).pairs, s.pairs);
}

}  // namespace
}  // namespace addrl::data
