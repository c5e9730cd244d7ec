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

#ifndef ADDRL_MODEL_ADDRL_MODEL_H_
#define ADDRL_MODEL_ADDRL_MODEL_H_

#include <array>
#include <span>
#include <vector>

#include "addrl/data/dataset.h"
#include "addrl/diff/tape.h"
#include "addrl/model/config.h"
#include "addrl/model/parameters.h"

namespace addrl::model {

// N entities of dimension d = C * chunk_dim, stored as (N*C) rows of
// chunk_dim so that row n*C + k is chunk k of entity n. This is a pure
// reshape of the (N, d) matrix: chunks are contiguous and tile the vector.
struct ChunkedVector {
  diff::Var rows;
  int num_entities = 0;
  int num_chunks = 0;

  int chunk_dim() const { return static_cast<int>(rows.cols()); }
  // (N, d) view.
  diff::Var Full() const;
  // (N, chunk_dim): chunk k of every entity.
  diff::Var Chunk(int k) const;
  // (N * |chunks|, chunk_dim), keeping the listed chunks in order.
  ChunkedVector Select(std::span<const int> chunks) const;
};

// Reinterprets an (N, d) matrix as chunks; throws ShapeError unless d
// matches the config.
ChunkedVector ChunkVector(diff::Var full, const ModelConfig& config);
// Chunk k of a plain vector is v[k*chunk_dim, (k+1)*chunk_dim).
std::vector<std::span<const double>> ChunkViews(std::span<const double> v,
                                                const ModelConfig& config);

// Parameter handles registered on one tape.
struct BoundParams {
  diff::Var user_embedding;
  diff::Var item_embedding;
  diff::Var textual_weight, textual_bias;
  diff::Var visual_weight, visual_bias;
  // Indexed like param::kIntraSources (user, item, textual, visual).
  std::array<diff::Var, 4> intra_weight, intra_bias;
  diff::Var attention_w1, attention_bias, attention_w2;
  std::vector<diff::Var> low_weight, low_bias;
  // Everything except embeddings and biases, for weight decay.
  std::vector<diff::Var> dense_weights;
};

BoundParams BindParameters(diff::Tape& tape, const ParameterStore& params,
                           const ModelConfig& config);

// act(raw * W^T + b), chunked. raw is (N, d0), W is (d, d0).
ChunkedVector ProjectModality(diff::Var raw, diff::Var weight, diff::Var bias,
                              const ModelConfig& config);

// A shared linear head maps every chunk to C logits; chunk k's target is
// class k. Returns the cross-entropy summed over chunks and entities.
diff::Var IntraModalityLoss(const ChunkedVector& source, diff::Var weight,
                            diff::Var bias);

// Both directions of the chunk-level contrastive loss between two
// modalities of the same items: for chunk k of `a`, the positive is chunk k
// of `b` and the negatives are b's other chunks; similarities are dot
// products divided by the temperature. Summed over chunks and items.
diff::Var InterModalityPairLoss(const ChunkedVector& a, const ChunkedVector& b,
                                const ModelConfig& config);
// Sum over the (id, textual), (id, visual), (textual, visual) pairs.
diff::Var InterModalityLoss(const ChunkedVector& id, const ChunkedVector& textual,
                            const ChunkedVector& visual, const ModelConfig& config);

struct Fusion {
  // ((N*C), 3) softmax weights over (id, textual, visual).
  diff::Var weights;
  ChunkedVector fused;
};

// Per chunk: w = softmax(W2 tanh(W1 (v_id + v_t + v_v) + b)), fused chunk
// = w_id v_id + w_t v_t + w_v v_v.
Fusion AttentionFuse(const ChunkedVector& id, const ChunkedVector& textual,
                     const ChunkedVector& visual, diff::Var w1, diff::Var bias,
                     diff::Var w2);

// Attribute-value cross-entropy of the first K fused chunks; `items` gives
// the item index of each fused entity. The residual chunk is not classified.
diff::Var LowLevelLoss(const ChunkedVector& fused, const data::AttributeLabels& labels,
                       std::span<const int> items, std::span<const diff::Var> weights,
                       std::span<const diff::Var> biases, const ModelConfig& config);

struct ScoreGraph {
  diff::Var per_chunk;  // (N, C) softplus scores
  diff::Var total;      // (N, 1)
};

// softplus(v_u^k . v_y^k) per chunk and their sum, pairing entity n of
// `users` with entity n of `items`.
ScoreGraph ScorePairs(const ChunkedVector& users, const ChunkedVector& items);

// Sum over triplets of -log sigmoid(s_pos - s_neg). neg_total holds
// num_negatives consecutive rows per positive.
diff::Var BprRankingLoss(diff::Var pos_total, diff::Var neg_total, int num_negatives);

// Sum of squared entries over all the given tensors.
diff::Var SquaredNorm(std::span<const diff::Var> parts);

// A training batch: positives[b] was observed for users[b]; negatives holds
// num_negatives consecutive entries per positive.
struct Batch {
  std::vector<int> users;
  std::vector<int> positives;
  std::vector<int> negatives;
  int num_negatives = 1;

  std::size_t size() const { return positives.size(); }
};

// Unweighted component values; total = bpr + alpha*intra + beta*inter +
// gamma*low. bpr includes the L2 (and optional weight decay) term.
struct LossReport {
  double total = 0.0;
  double bpr = 0.0;
  double intra = 0.0;
  double inter = 0.0;
  double low = 0.0;
};

struct LossOptions {
  // Drop zero-weight terms from the graph instead of multiplying them by 0.
  // Their reported value is then 0.
  bool prune_zero_weight_terms = false;
};

struct LossGraph {
  diff::Var total;
  // Unweighted components; a pruned term is left invalid.
  diff::Var bpr, intra, inter, low;
  LossReport report;
};

// Dense item-side representations for every item, computed without
// gradients. All matrices are (num_items, d) except attention.
struct ItemRepresentations {
  diff::Tensor id;
  diff::Tensor textual;
  diff::Tensor visual;
  diff::Tensor fused;
  diff::Tensor attention;  // (num_items * C, 3)
};

// The full model over one dataset. Holds a pointer to the dataset, which
// must outlive it.
class AddrlModel {
 public:
  AddrlModel(ModelConfig config, const data::Dataset& dataset);

  const ModelConfig& config() const { return config_; }
  const data::Dataset& dataset() const { return *dataset_; }

  struct ItemGraph {
    ChunkedVector id;
    ChunkedVector textual;
    ChunkedVector visual;
    Fusion fusion;
  };
  // Item-side graph for the listed items.
  ItemGraph ItemSide(diff::Tape& tape, const BoundParams& params,
                     std::span<const int> items) const;

  // Total objective over a batch. The disentanglement sums run over the
  // batch's (user, positive) pairs.
  LossGraph TotalLoss(diff::Tape& tape, const BoundParams& params,
                      const Batch& batch, LossOptions options = {}) const;

  ItemRepresentations ComputeItemRepresentations(const ParameterStore& params) const;

 private:
  ModelConfig config_;
  const data::Dataset* dataset_;
};

// Per-chunk positive scores and their sum.
struct ScoreBreakdown {
  std::vector<double> parts;
  double total = 0.0;
};

ScoreBreakdown MakeBreakdown(std::span<const double> user,
                             std::span<const double> fused_item,
                             const ModelConfig& config);

// xi * s_a + sum_{k != a} s_k, evaluated as total + (xi - 1) * s_a so that
// xi = 1 reproduces the total bit for bit. Throws ConfigError unless
// 0 <= attribute < num_attributes (the residual chunk is not addressable).
double ControllableScore(const ScoreBreakdown& breakdown, int attribute, double xi,
                         int num_attributes);

}  // namespace addrl::model

#endif  // ADDRL_MODEL_ADDRL_MODEL_H_
