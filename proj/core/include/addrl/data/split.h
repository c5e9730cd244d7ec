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

#ifndef ADDRL_DATA_SPLIT_H_
#define ADDRL_DATA_SPLIT_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "addrl/data/interactions.h"

namespace addrl::data {

// Per-user train / validation / test partition. Each per-user list is sorted
// ascending, which doubles as the membership index used to enumerate the
// negative candidates (items outside the user's train list).
struct DatasetSplit {
  int num_items = 0;
  std::vector<std::vector<int>> train;
  std::vector<std::vector<int>> validation;
  std::vector<std::vector<int>> test;

  int num_users() const { return static_cast<int>(train.size()); }
  bool InTrain(int user, int item) const;
  int NumCandidates(int user) const;
  // The r-th item (ascending) not in the user's train list.
  int Candidate(int user, int r) const;
  // All training (user, item) pairs, user-major.
  std::vector<std::pair<int, int>> TrainPairs() const;
  std::size_t NumTrain() const;
};

// Per user, ceil(0.2 n) interactions go to test, capped so that at least one
// stays in the train pool. Then floor(0.1 P) of the P pooled train
// interactions move to validation, drawn globally at random but never taking
// a user's last training item. Deterministic in seed.
DatasetSplit SplitDataset(const InteractionSet& interactions, std::uint64_t seed);

// n_neg draws, uniform with replacement over items outside the user's train
// list; a pure function of (seed, user, step). Throws DataError when the user
// trained on every item.
std::vector<int> SampleNegatives(const DatasetSplit& split, int user, int n_neg,
                                 std::uint64_t seed, std::uint64_t step);

}  // namespace addrl::data

#endif  // ADDRL_DATA_SPLIT_H_
