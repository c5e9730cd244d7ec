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

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::data {
namespace {

std::string_view TrimCr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

long long PairKey(int user, int item) {
  return (static_cast<long long>(user) << 32) | static_cast<unsigned>(item);
}

}  // namespace

int IdMap::Intern(std::string_view token) {
  auto [it, inserted] =
      index_.emplace(std::string(token), static_cast<int>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int IdMap::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

bool InteractionSet::Add(std::string_view user, std::string_view item) {
  const int u = users.Intern(user);
  const int i = items.Intern(item);
  if (!seen_.emplace(PairKey(u, i), true).second) return false;
  pairs.emplace_back(u, i);
  return true;
}

std::vector<std::vector<int>> InteractionSet::ByUser() const {
  std::vector<std::vector<int>> out(num_users());
  for (const auto& [u, i] : pairs) out[u].push_back(i);
  return out;
}

InteractionSet ParseInteractions(std::istream& in, std::string_view source) {
  InteractionSet set;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = TrimCr(line);
    if (view.empty()) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos ||
        view.find('\t', tab + 1) != std::string_view::npos) {
      throw DataError(fmt::format(
          "{}:{}: expected `user<TAB>item`, got '{}'", source, line_no, view));
    }
    const std::string_view user = view.substr(0, tab);
    const std::string_view item = view.substr(tab + 1);
    if (user.empty() || item.empty()) {
      throw DataError(fmt::format("{}:{}: empty user or item token", source, line_no));
    }
    set.Add(user, item);
  }
  if (set.pairs.empty()) {
    throw DataError(fmt::format("{}: no interactions", source));
  }
  return set;
}

InteractionSet LoadInteractions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return ParseInteractions(in, path.string());
}

void SaveInteractions(const InteractionSet& set,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  for (const auto& [u, i] : set.pairs) {
    out << set.users.token(u) << '\t' << set.items.token(i) << '\n';
  }
}

InteractionSet KCoreFilter(const InteractionSet& set, int k) {
  if (k <= 1) return set;
  std::vector<bool> alive(set.pairs.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> user_deg(set.num_users(), 0), item_deg(set.num_items(), 0);
    for (std::size_t p = 0; p < set.pairs.size(); ++p) {
      if (!alive[p]) continue;
      ++user_deg[set.pairs[p].first];
      ++item_deg[set.pairs[p].second];
    }
    for (std::size_t p = 0; p < set.pairs.size(); ++p) {
      if (!alive[p]) continue;
      if (user_deg[set.pairs[p].first] < k || item_deg[set.pairs[p].second] < k) {
        alive[p] = false;
        changed = true;
      }
    }
  }
  InteractionSet out;
  for (std::size_t p = 0; p < set.pairs.size(); ++p) {
    if (!alive[p]) continue;
    out.Add(set.users.token(set.pairs[p].first),
            set.items.token(set.pairs[p].second));
  }
  if (out.pairs.empty()) {
    throw DataError(fmt::format("{}-core filter removed every interaction", k));
  }
  return out;
}

void WriteIdMap(const IdMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  for (int i = 0; i < map.size(); ++i) out << i << '\t' << map.token(i) << '\n';
}

IdMap ReadIdMap(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  IdMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = TrimCr(line);
    if (view.empty()) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(fmt::format("{}:{}: expected `index<TAB>token`",
                                  path.string(), line_no));
    }
    const int expected = map.size();
    if (view.substr(0, tab) != std::to_string(expected)) {
      throw DataError(fmt::format("{}:{}: expected index {}", path.string(),
                                  line_no, expected));
    }
    map.Intern(view.substr(tab + 1));
  }
  return map;
}

}  // namespace addrl::data
