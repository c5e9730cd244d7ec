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

#include "addrl/model/addrl_model.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::model {

using diff::Shape;
using diff::ShapeString;
using diff::Tape;
using diff::Tensor;
using diff::Var;

namespace {

std::vector<int> ChunkTargets(int num_entities, int num_chunks) {
  std::vector<int> targets(static_cast<std::size_t>(num_entities) * num_chunks);
  for (std::size_t r = 0; r < targets.size(); ++r)
    targets[r] = static_cast<int>(r % num_chunks);
  return targets;
}

// Summed cross-entropy of row-wise logits against the given classes.
Var CrossEntropySum(Var logits, std::span<const int> targets) {
  return Scale(Sum(Pick(LogSoftmaxRows(logits), targets)), -1.0);
}

// x W^T + b
Var Linear(Var x, Var weight, Var bias) {
  return Add(MatMul(x, Transpose(weight)), bias);
}

Var Activate(Var x, Activation act) {
  switch (act) {
    case Activation::kTanh:
      return Tanh(x);
    case Activation::kSigmoid:
      return Sigmoid(x);
    case Activation::kRelu:
      return Relu(x);
    case Activation::kIdentity:
      return x;
  }
  return Tanh(x);
}

Var AddAll(std::span<const Var> terms) {
  Var acc = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) acc = Add(acc, terms[i]);
  return acc;
}

}  // namespace

// ---- ChunkedVector --------------------------------------------------------

Var ChunkedVector::Full() const {
  return Reshape(rows, {static_cast<std::size_t>(num_entities),
                        static_cast<std::size_t>(num_chunks) * rows.cols()});
}

Var ChunkedVector::Chunk(int k) const {
  if (k < 0 || k >= num_chunks) {
    throw ShapeError(fmt::format("chunk {} out of range for {} chunks", k, num_chunks));
  }
  std::vector<int> idx(num_entities);
  for (int n = 0; n < num_entities; ++n) idx[n] = n * num_chunks + k;
  return GatherRows(rows, idx);
}

ChunkedVector ChunkedVector::Select(std::span<const int> chunks) const {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(num_entities) * chunks.size());
  for (int n = 0; n < num_entities; ++n)
    for (int k : chunks) idx.push_back(n * num_chunks + k);
  return ChunkedVector{GatherRows(rows, idx), num_entities,
                       static_cast<int>(chunks.size())};
}

ChunkedVector ChunkVector(Var full, const ModelConfig& config) {
  if (full.cols() != static_cast<std::size_t>(config.dim())) {
    throw ShapeError(fmt::format(
        "chunking needs vectors of dimension {} ({} chunks of {}), got {}",
        config.dim(), config.num_chunks(), config.chunk_dim, ShapeString(full.shape())));
  }
  const std::size_t n = full.rows();
  return ChunkedVector{
      Reshape(full, {n * static_cast<std::size_t>(config.num_chunks()),
                     static_cast<std::size_t>(config.chunk_dim)}),
      static_cast<int>(n), config.num_chunks()};
}

std::vector<std::span<const double>> ChunkViews(std::span<const double> v,
                                                const ModelConfig& config) {
  if (v.size() != static_cast<std::size_t>(config.dim())) {
    throw ShapeError(fmt::format("vector of length {} does not match d = {}",
                                 v.size(), config.dim()));
  }
  std::vector<std::span<const double>> out;
  for (int k = 0; k < config.num_chunks(); ++k)
    out.push_back(v.subspan(static_cast<std::size_t>(k) * config.chunk_dim,
                            config.chunk_dim));
  return out;
}

// ---- Parameters -----------------------------------------------------------

BoundParams BindParameters(Tape& tape, const ParameterStore& params,
                           const ModelConfig& config) {
  BoundParams b;
  auto watch = [&](std::string_view name) { return tape.Watch(params.Get(name)); };
  b.user_embedding = watch(param::kUserEmbedding);
  b.item_embedding = watch(param::kItemEmbedding);
  b.textual_weight = watch(param::kTextualWeight);
  b.textual_bias = watch(param::kTextualBias);
  b.visual_weight = watch(param::kVisualWeight);
  b.visual_bias = watch(param::kVisualBias);
  for (std::size_t s = 0; s < 4; ++s) {
    b.intra_weight[s] = watch(param::IntraWeight(param::kIntraSources[s]));
    b.intra_bias[s] = watch(param::IntraBias(param::kIntraSources[s]));
  }
  b.attention_w1 = watch(param::kAttentionW1);
  b.attention_bias = watch(param::kAttentionBias);
  b.attention_w2 = watch(param::kAttentionW2);
  for (int k = 0; k < config.num_attributes; ++k) {
    b.low_weight.push_back(watch(param::LowWeight(k)));
    b.low_bias.push_back(watch(param::LowBias(k)));
  }
  b.dense_weights = {b.textual_weight, b.visual_weight, b.attention_w1,
                     b.attention_w2};
  for (const Var& w : b.intra_weight) b.dense_weights.push_back(w);
  for (const Var& w : b.low_weight) b.dense_weights.push_back(w);
  return b;
}

// ---- Forward pieces -------------------------------------------------------

ChunkedVector ProjectModality(Var raw, Var weight, Var bias, const ModelConfig& config) {
  if (raw.cols() != weight.cols()) {
    throw ShapeError(fmt::format("raw feature of shape {} does not match projection {}",
                                 ShapeString(raw.shape()), ShapeString(weight.shape())));
  }
  return ChunkVector(Activate(Linear(raw, weight, bias), config.activation), config);
}

Var IntraModalityLoss(const ChunkedVector& source, Var weight, Var bias) {
  if (weight.rows() != static_cast<std::size_t>(source.num_chunks)) {
    throw ShapeError(fmt::format("intra classifier {} does not emit {} classes",
                                 ShapeString(weight.shape()), source.num_chunks));
  }
  const std::vector<int> targets = ChunkTargets(source.num_entities, source.num_chunks);
  return CrossEntropySum(Linear(source.rows, weight, bias), targets);
}

Var InterModalityPairLoss(const ChunkedVector& a, const ChunkedVector& b,
                          const ModelConfig& config) {
  if (!(config.temperature > 0.0)) {
    throw ConfigError(fmt::format("temperature must be > 0, got {}", config.temperature));
  }
  ChunkedVector lhs = a, rhs = b;
  if (config.residual_chunk && !config.inter_include_residual && a.num_chunks > 1) {
    std::vector<int> named(config.num_attributes);
    for (int k = 0; k < config.num_attributes; ++k) named[k] = k;
    lhs = a.Select(named);
    rhs = b.Select(named);
  }
  Var x = lhs.rows, y = rhs.rows;
  if (config.normalize_contrastive) {
    x = L2NormalizeRows(x);
    y = L2NormalizeRows(y);
  }
  const auto block = static_cast<std::size_t>(lhs.num_chunks);
  const double inv_tau = 1.0 / config.temperature;
  const std::vector<int> targets = ChunkTargets(lhs.num_entities, lhs.num_chunks);
  Var forward = CrossEntropySum(Scale(BlockDot(x, y, block), inv_tau), targets);
  Var backward = CrossEntropySum(Scale(BlockDot(y, x, block), inv_tau), targets);
  return Add(forward, backward);
}

Var InterModalityLoss(const ChunkedVector& id, const ChunkedVector& textual,
                      const ChunkedVector& visual, const ModelConfig& config) {
  const Var terms[] = {InterModalityPairLoss(id, textual, config),
                       InterModalityPairLoss(id, visual, config),
                       InterModalityPairLoss(textual, visual, config)};
  return AddAll(terms);
}

Fusion AttentionFuse(const ChunkedVector& id, const ChunkedVector& textual,
                     const ChunkedVector& visual, Var w1, Var bias, Var w2) {
  Var summed = Add(Add(id.rows, textual.rows), visual.rows);
  Var hidden = Tanh(Linear(summed, w1, bias));
  Var weights = SoftmaxRows(MatMul(hidden, Transpose(w2)));
  Var fused = Add(Add(ScaleRows(id.rows, Slice(weights, 0, 1)),
                      ScaleRows(textual.rows, Slice(weights, 1, 2))),
                  ScaleRows(visual.rows, Slice(weights, 2, 3)));
  return Fusion{weights, ChunkedVector{fused, id.num_entities, id.num_chunks}};
}

Var LowLevelLoss(const ChunkedVector& fused, const data::AttributeLabels& labels,
                 std::span<const int> items, std::span<const Var> weights,
                 std::span<const Var> biases, const ModelConfig& config) {
  if (static_cast<int>(items.size()) != fused.num_entities) {
    throw ShapeError(fmt::format("{} item ids for {} fused entities", items.size(),
                                 fused.num_entities));
  }
  std::vector<Var> terms;
  std::vector<int> targets(items.size());
  for (int k = 0; k < config.num_attributes; ++k) {
    const int num_values = config.attribute_sizes[k];
    for (std::size_t n = 0; n < items.size(); ++n) {
      const int label = labels.at(items[n], k);
      if (label < 0 || label >= num_values) {
        throw DataError(fmt::format("item {} has label {} for attribute {} with {} values",
                                    items[n], label, k, num_values));
      }
      targets[n] = label;
    }
    terms.push_back(CrossEntropySum(Linear(fused.Chunk(k), weights[k], biases[k]), targets));
  }
  return AddAll(terms);
}

ScoreGraph ScorePairs(const ChunkedVector& users, const ChunkedVector& items) {
  if (users.num_entities != items.num_entities || users.num_chunks != items.num_chunks) {
    throw ShapeError(fmt::format("cannot score {} users ({} chunks) against {} items ({} chunks)",
                                 users.num_entities, users.num_chunks,
                                 items.num_entities, items.num_chunks));
  }
  Var per_chunk = Reshape(Softplus(RowDot(users.rows, items.rows)),
                          {static_cast<std::size_t>(users.num_entities),
                           static_cast<std::size_t>(users.num_chunks)});
  return ScoreGraph{per_chunk, RowSum(per_chunk)};
}

Var BprRankingLoss(Var pos_total, Var neg_total, int num_negatives) {
  if (num_negatives < 1 ||
      neg_total.rows() != pos_total.rows() * static_cast<std::size_t>(num_negatives)) {
    throw ShapeError(fmt::format("{} negative scores for {} positives x {} negatives",
                                 neg_total.rows(), pos_total.rows(), num_negatives));
  }
  std::vector<int> repeat(neg_total.rows());
  for (std::size_t r = 0; r < repeat.size(); ++r)
    repeat[r] = static_cast<int>(r / num_negatives);
  Var diff = Sub(GatherRows(pos_total, repeat), neg_total);
  return Scale(Sum(LogSigmoid(diff)), -1.0);
}

Var SquaredNorm(std::span<const Var> parts) {
  std::vector<Var> sums;
  for (const Var& p : parts) sums.push_back(Sum(Mul(p, p)));
  return AddAll(sums);
}

// ---- AddrlModel -----------------------------------------------------------

AddrlModel::AddrlModel(ModelConfig config, const data::Dataset& dataset)
    : config_(std::move(config)), dataset_(&dataset) {
  config_.Validate();
  if (dataset.textual.dim() != config_.d0_textual ||
      dataset.visual.dim() != config_.d0_visual) {
    throw ConfigError(fmt::format(
        "dataset features ({}, {}) do not match configured d0 ({}, {})",
        dataset.textual.dim(), dataset.visual.dim(), config_.d0_textual,
        config_.d0_visual));
  }
  if (dataset.schema().sizes() != config_.attribute_sizes) {
    throw ConfigError("dataset attribute schema does not match the model config");
  }
}

AddrlModel::ItemGraph AddrlModel::ItemSide(Tape& tape, const BoundParams& params,
                                           std::span<const int> items) const {
  ItemGraph g;
  g.id = ChunkVector(GatherRows(params.item_embedding, items), config_);
  Var text_raw = GatherRows(tape.Watch(dataset_->textual.matrix), items);
  Var visual_raw = GatherRows(tape.Watch(dataset_->visual.matrix), items);
  g.textual = ProjectModality(text_raw, params.textual_weight, params.textual_bias, config_);
  g.visual = ProjectModality(visual_raw, params.visual_weight, params.visual_bias, config_);
  g.fusion = AttentionFuse(g.id, g.textual, g.visual, params.attention_w1,
                           params.attention_bias, params.attention_w2);
  return g;
}

LossGraph AddrlModel::TotalLoss(Tape& tape, const BoundParams& params,
                                const Batch& batch, LossOptions options) const {
  const std::size_t b = batch.size();
  if (b == 0) throw DataError("empty training batch");
  if (batch.users.size() != b ||
      batch.negatives.size() != b * static_cast<std::size_t>(batch.num_negatives)) {
    throw ShapeError("batch users/positives/negatives sizes are inconsistent");
  }

  // Item-side work runs once per distinct item in the batch.
  std::vector<int> unique(batch.positives);
  unique.insert(unique.end(), batch.negatives.begin(), batch.negatives.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  auto position = [&](int item) {
    return static_cast<int>(std::lower_bound(unique.begin(), unique.end(), item) -
                            unique.begin());
  };
  std::vector<int> pos_rows(b), neg_rows(batch.negatives.size());
  for (std::size_t i = 0; i < b; ++i) pos_rows[i] = position(batch.positives[i]);
  for (std::size_t i = 0; i < neg_rows.size(); ++i) neg_rows[i] = position(batch.negatives[i]);

  const ItemGraph items = ItemSide(tape, params, unique);
  auto take = [&](const ChunkedVector& cv, std::span<const int> rows) {
    return ChunkVector(GatherRows(cv.Full(), rows), config_);
  };

  Var user_rows = GatherRows(params.user_embedding, batch.users);
  ChunkedVector users = ChunkVector(user_rows, config_);
  ChunkedVector pos_id = take(items.id, pos_rows);
  ChunkedVector pos_fused = take(items.fusion.fused, pos_rows);
  ChunkedVector neg_fused = take(items.fusion.fused, neg_rows);

  // Ranking term.
  ScoreGraph pos_scores = ScorePairs(users, pos_fused);
  std::vector<int> repeat(batch.negatives.size());
  for (std::size_t r = 0; r < repeat.size(); ++r)
    repeat[r] = static_cast<int>(r / batch.num_negatives);
  ScoreGraph neg_scores =
      ScorePairs(ChunkVector(GatherRows(user_rows, repeat), config_), neg_fused);
  Var bpr = BprRankingLoss(pos_scores.total, neg_scores.total, batch.num_negatives);

  const Var touched[] = {user_rows, GatherRows(params.item_embedding, batch.positives),
                         GatherRows(params.item_embedding, batch.negatives)};
  bpr = Add(bpr, Scale(SquaredNorm(touched), config_.l2));
  if (config_.weight_decay > 0.0) {
    bpr = Add(bpr, Scale(SquaredNorm(params.dense_weights), config_.weight_decay));
  }

  LossGraph out;
  out.bpr = bpr;
  out.report.bpr = bpr.value().item();
  Var total = bpr;
  auto include = [&](double weight) {
    return !(options.prune_zero_weight_terms && weight == 0.0);
  };

  if (include(config_.alpha)) {
    ChunkedVector pos_text = take(items.textual, pos_rows);
    ChunkedVector pos_visual = take(items.visual, pos_rows);
    const Var terms[] = {
        IntraModalityLoss(users, params.intra_weight[0], params.intra_bias[0]),
        IntraModalityLoss(pos_id, params.intra_weight[1], params.intra_bias[1]),
        IntraModalityLoss(pos_text, params.intra_weight[2], params.intra_bias[2]),
        IntraModalityLoss(pos_visual, params.intra_weight[3], params.intra_bias[3])};
    Var intra = AddAll(terms);
    out.intra = intra;
    out.report.intra = intra.value().item();
    total = Add(total, Scale(intra, config_.alpha));
  }
  if (include(config_.beta)) {
    Var inter = InterModalityLoss(pos_id, take(items.textual, pos_rows),
                                  take(items.visual, pos_rows), config_);
    out.inter = inter;
    out.report.inter = inter.value().item();
    total = Add(total, Scale(inter, config_.beta));
  }
  if (include(config_.gamma)) {
    Var low = LowLevelLoss(pos_fused, dataset_->labels(), batch.positives,
                           params.low_weight, params.low_bias, config_);
    out.low = low;
    out.report.low = low.value().item();
    total = Add(total, Scale(low, config_.gamma));
  }
  out.total = total;
  out.report.total = total.value().item();
  return out;
}

ItemRepresentations AddrlModel::ComputeItemRepresentations(
    const ParameterStore& params) const {
  Tape tape(/*track_gradients=*/false);
  BoundParams bound = BindParameters(tape, params, config_);
  std::vector<int> all(dataset_->num_items());
  for (int i = 0; i < dataset_->num_items(); ++i) all[i] = i;
  ItemGraph g = ItemSide(tape, bound, all);
  return ItemRepresentations{g.id.Full().value(), g.textual.Full().value(),
                             g.visual.Full().value(), g.fusion.fused.Full().value(),
                             g.fusion.weights.value()};
}

// ---- Scores ---------------------------------------------------------------

ScoreBreakdown MakeBreakdown(std::span<const double> user,
                             std::span<const double> fused_item,
                             const ModelConfig& config) {
  const auto u = ChunkViews(user, config);
  const auto v = ChunkViews(fused_item, config);
  ScoreBreakdown out;
  out.parts.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    double dot = 0.0;
    for (std::size_t j = 0; j < u[k].size(); ++j) dot += u[k][j] * v[k][j];
    out.parts.push_back(diff::StableSoftplus(dot));
  }
  for (double p : out.parts) out.total += p;
  return out;
}

double ControllableScore(const ScoreBreakdown& breakdown, int attribute, double xi,
                         int num_attributes) {
  if (attribute < 0 || attribute >= num_attributes ||
      attribute >= static_cast<int>(breakdown.parts.size())) {
    throw ConfigError(fmt::format("attribute index {} out of range [0, {})", attribute,
                                  num_attributes));
  }
  return breakdown.total + (xi - 1.0) * breakdown.parts[attribute];
}

}  // namespace addrl::model
