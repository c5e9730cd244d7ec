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
#include <memory>
#include <numeric>

#include <fmt/format.h>

#include "addrl/error.h"
#include "addrl/random.h"

namespace addrl::eval {

std::vector<RankedItem> TopN(std::span<const double> scores,
                             std::span<const int> excluded, int n) {
  if (n < 1) throw ConfigError(fmt::format("n must be >= 1, got {}", n));
  std::vector<RankedItem> candidates;
  candidates.reserve(scores.size());
  auto skip = excluded.begin();
  for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
    while (skip != excluded.end() && *skip < i) ++skip;
    if (skip != excluded.end() && *skip == i) continue;
    candidates.push_back({i, scores[i]});
  }
  auto better = [](const RankedItem& a, const RankedItem& b) {
    return a.score > b.score || (a.score == b.score && a.item < b.item);
  };
  const std::size_t depth = std::min<std::size_t>(candidates.size(), n);
  std::partial_sort(candidates.begin(), candidates.begin() + depth, candidates.end(),
                    better);
  candidates.resize(depth);
  return candidates;
}

Scorer::Scorer(const model::AddrlModel& model, const model::ParameterStore& params)
    : model_(&model),
      users_(params.Get(model::param::kUserEmbedding)),
      items_(model.ComputeItemRepresentations(params)) {}

void Scorer::CheckUser(int user) const {
  if (user < 0 || user >= num_users()) {
    throw DataError(fmt::format("unknown user index {} ({} users)", user, num_users()));
  }
}

model::ScoreBreakdown Scorer::Breakdown(int user, int item) const {
  CheckUser(user);
  if (item < 0 || item >= num_items()) {
    throw DataError(fmt::format("unknown item index {} ({} items)", item, num_items()));
  }
  return model::MakeBreakdown(users_.row(user), items_.fused.row(item), config());
}

double Scorer::Score(int user, int item) const { return Breakdown(user, item).total; }

void Scorer::ChunkScores(int user, std::vector<double>& out) const {
  CheckUser(user);
  const int chunks = config().num_chunks();
  const int width = config().chunk_dim;
  const auto u = users_.row(user);
  out.resize(static_cast<std::size_t>(num_items()) * chunks);
  for (int i = 0; i < num_items(); ++i) {
    const auto v = items_.fused.row(i);
    for (int k = 0; k < chunks; ++k) {
      double dot = 0.0;
      for (int j = k * width; j < (k + 1) * width; ++j) dot += u[j] * v[j];
      out[static_cast<std::size_t>(i) * chunks + k] = diff::StableSoftplus(dot);
    }
  }
}

void Scorer::ScoreAll(int user, std::vector<double>& out) const {
  std::vector<double> parts;
  ChunkScores(user, parts);
  const int chunks = config().num_chunks();
  out.assign(num_items(), 0.0);
  for (int i = 0; i < num_items(); ++i) {
    double total = 0.0;
    for (int k = 0; k < chunks; ++k) total += parts[static_cast<std::size_t>(i) * chunks + k];
    out[i] = total;
  }
}

void Scorer::ScoreAllControlled(int user, int attribute, double xi,
                                std::vector<double>& out) const {
  if (attribute < 0 || attribute >= config().num_attributes) {
    throw ConfigError(fmt::format("attribute index {} out of range [0, {})", attribute,
                                  config().num_attributes));
  }
  std::vector<double> parts;
  ChunkScores(user, parts);
  const int chunks = config().num_chunks();
  out.assign(num_items(), 0.0);
  model::ScoreBreakdown b;
  for (int i = 0; i < num_items(); ++i) {
    const auto first = parts.begin() + static_cast<std::ptrdiff_t>(i) * chunks;
    b.parts.assign(first, first + chunks);
    b.total = 0.0;
    for (double p : b.parts) b.total += p;
    out[i] = model::ControllableScore(b, attribute, xi, config().num_attributes);
  }
}

std::vector<RankedItem> RankItems(const Scorer& scorer, const data::DatasetSplit& split,
                                  int user, int n) {
  if (user < 0 || user >= split.num_users()) {
    throw DataError(fmt::format("unknown user index {} ({} users)", user,
                                split.num_users()));
  }
  std::vector<double> scores;
  scorer.ScoreAll(user, scores);
  return TopN(scores, split.train[user], n);
}

std::vector<MetricSummary> EvaluateRanking(const data::DatasetSplit& split, EvalSplit which,
                                           std::span<const int> ns, const ScoreFn& score) {
  if (ns.empty()) return {};
  const int depth = *std::max_element(ns.begin(), ns.end());
  const auto& held_out = which == EvalSplit::kTest ? split.test : split.validation;
  std::vector<MetricSummary> out(ns.size());
  for (std::size_t j = 0; j < ns.size(); ++j) out[j].n = ns[j];
  std::vector<double> scores;
  std::vector<int> ranking;
  for (int u = 0; u < split.num_users(); ++u) {
    if (held_out[u].empty()) continue;
    score(u, scores);
    if (static_cast<int>(scores.size()) != split.num_items) {
      throw ShapeError(fmt::format("scorer returned {} scores for {} items", scores.size(),
                                   split.num_items));
    }
    ranking.clear();
    for (const RankedItem& r : TopN(scores, split.train[u], depth)) ranking.push_back(r.item);
    for (std::size_t j = 0; j < ns.size(); ++j) {
      out[j].recall += RecallAtN(ranking, held_out[u], ns[j]);
      out[j].ndcg += NdcgAtN(ranking, held_out[u], ns[j]);
      ++out[j].users_counted;
    }
  }
  for (MetricSummary& m : out) {
    if (m.users_counted > 0) {
      m.recall /= m.users_counted;
      m.ndcg /= m.users_counted;
    }
  }
  return out;
}

MetricSummary EvaluateRanking(const data::DatasetSplit& split, EvalSplit which, int n,
                              const ScoreFn& score) {
  const int ns[] = {n};
  return EvaluateRanking(split, which, ns, score)[0];
}

ScoreFn ModelScores(const Scorer& scorer) {
  return [&scorer](int user, std::vector<double>& out) { scorer.ScoreAll(user, out); };
}

ScoreFn PopularityScores(const data::DatasetSplit& split) {
  auto counts = std::make_shared<std::vector<double>>(split.num_items, 0.0);
  for (const auto& items : split.train)
    for (int i : items) (*counts)[i] += 1.0;
  return [counts](int, std::vector<double>& out) { out = *counts; };
}

ScoreFn RandomScores(int num_items, std::uint64_t seed) {
  return [num_items, seed](int user, std::vector<double>& out) {
    CounterRng rng(seed, {static_cast<std::uint64_t>(user)});
    out.resize(num_items);
    for (double& s : out) s = rng.uniform();
  };
}

}  // namespace addrl::eval
