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

#include <fmt/format.h>

#include "addrl/error.h"
#include "addrl/random.h"

namespace addrl::data {
namespace {

constexpr std::uint64_t kSplitStream = 0x53504c4954ULL;     // "SPLIT"
constexpr std::uint64_t kNegativeStream = 0x4e45474154ULL;  // "NEGAT"

}  // namespace

bool DatasetSplit::InTrain(int user, int item) const {
  const auto& t = train[user];
  return std::binary_search(t.begin(), t.end(), item);
}

int DatasetSplit::NumCandidates(int user) const {
  return num_items - static_cast<int>(train[user].size());
}

int DatasetSplit::Candidate(int user, int r) const {
  // Walk the sorted exclusions; each one at or below the running item pushes
  // the answer up by one.
  int item = r;
  for (int excluded : train[user]) {
    if (excluded <= item) {
      ++item;
    } else {
      break;
    }
  }
  return item;
}

std::vector<std::pair<int, int>> DatasetSplit::TrainPairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(NumTrain());
  for (int u = 0; u < num_users(); ++u)
    for (int i : train[u]) out.emplace_back(u, i);
  return out;
}

std::size_t DatasetSplit::NumTrain() const {
  std::size_t n = 0;
  for (const auto& t : train) n += t.size();
  return n;
}

DatasetSplit SplitDataset(const InteractionSet& interactions, std::uint64_t seed) {
  const int num_users = interactions.num_users();
  DatasetSplit split;
  split.num_items = interactions.num_items();
  split.train.resize(num_users);
  split.validation.resize(num_users);
  split.test.resize(num_users);

  std::vector<std::vector<int>> by_user = interactions.ByUser();
  std::vector<std::pair<int, int>> pool;
  for (int u = 0; u < num_users; ++u) {
    std::vector<int>& items = by_user[u];
    const std::size_t n = items.size();
    if (n == 0) {
      throw DataError(fmt::format("user '{}' has no interactions",
                                  interactions.users.token(u)));
    }
    CounterRng rng(seed, {kSplitStream, 0, static_cast<std::uint64_t>(u)});
    std::shuffle(items.begin(), items.end(), rng);
    std::size_t n_test = (2 * n + 9) / 10;  // ceil(0.2 n)
    if (n_test >= n) n_test = n - 1;
    split.test[u].assign(items.begin(), items.begin() + n_test);
    for (std::size_t j = n_test; j < n; ++j) pool.emplace_back(u, items[j]);
  }

  const std::size_t n_validation = pool.size() / 10;
  CounterRng rng(seed, {kSplitStream, 1});
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> remaining(num_users, 0);
  for (const auto& [u, i] : pool) ++remaining[u];
  std::size_t chosen = 0;
  for (const auto& [u, i] : pool) {
    if (chosen < n_validation && remaining[u] > 1) {
      split.validation[u].push_back(i);
      --remaining[u];
      ++chosen;
    } else {
      split.train[u].push_back(i);
    }
  }
  for (int u = 0; u < num_users; ++u) {
    std::sort(split.train[u].begin(), split.train[u].end());
    std::sort(split.validation[u].begin(), split.validation[u].end());
    std::sort(split.test[u].begin(), split.test[u].end());
  }
  return split;
}

std::vector<int> SampleNegatives(const DatasetSplit& split, int user, int n_neg,
                                 std::uint64_t seed, std::uint64_t step) {
  if (n_neg < 1) throw ConfigError(fmt::format("n_neg must be >= 1, got {}", n_neg));
  if (user < 0 || user >= split.num_users()) {
    throw DataError(fmt::format("user index {} out of range", user));
  }
  const int candidates = split.NumCandidates(user);
  if (candidates <= 0) {
    throw DataError(fmt::format(
        "user {} interacted with every item in training; no negatives", user));
  }
  CounterRng rng(seed, {kNegativeStream, static_cast<std::uint64_t>(user), step});
  std::vector<int> out(n_neg);
  for (int& item : out) {
    item = split.Candidate(user, static_cast<int>(rng.below(candidates)));
  }
  return out;
}

}  // namespace addrl::data
