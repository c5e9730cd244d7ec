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

#ifndef ADDRL_DATA_INTERACTIONS_H_
#define ADDRL_DATA_INTERACTIONS_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace addrl::data {

// Bidirectional token <-> dense index map; indices follow first appearance.
class IdMap {
 public:
  int Intern(std::string_view token);
  // -1 when absent.
  int Find(std::string_view token) const;
  const std::string& token(int index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  int size() const { return static_cast<int>(tokens_.size()); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Implicit-feedback interactions over dense user and item index spaces.
struct InteractionSet {
  IdMap users;
  IdMap items;
  // Unique (user, item) pairs in first-appearance order.
  std::vector<std::pair<int, int>> pairs;

  int num_users() const { return users.size(); }
  int num_items() const { return items.size(); }
  std::size_t size() const { return pairs.size(); }

  // Adds a pair unless already present; returns whether it was new.
  bool Add(std::string_view user, std::string_view item);
  // Items of every user, in insertion order.
  std::vector<std::vector<int>> ByUser() const;

 private:
  std::unordered_map<long long, bool> seen_;
};

// Parses `user<TAB>item` lines. Blank lines are skipped, duplicates
// collapsed. Throws DataError naming the line on malformed input and when no
// interactions remain.
InteractionSet ParseInteractions(std::istream& in, std::string_view source);
InteractionSet LoadInteractions(const std::filesystem::path& path);
void SaveInteractions(const InteractionSet& set, const std::filesystem::path& path);

// Iteratively drops users and items with fewer than k interactions and
// re-indexes the survivors in their original relative order. k <= 1 is a
// no-op.
InteractionSet KCoreFilter(const InteractionSet& set, int k);

// Sidecar `index<TAB>token` file.
void WriteIdMap(const IdMap& map, const std::filesystem::path& path);
IdMap ReadIdMap(const std::filesystem::path& path);

}  // namespace addrl::data

#endif  // ADDRL_DATA_INTERACTIONS_H_
