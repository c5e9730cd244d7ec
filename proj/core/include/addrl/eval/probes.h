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

#ifndef ADDRL_EVAL_PROBES_H_
#define ADDRL_EVAL_PROBES_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "addrl/model/addrl_model.h"
#include "addrl/model/parameters.h"

namespace addrl::eval {

enum class ProbeSource { kUserId, kItemId, kTextual, kVisual };

inline constexpr ProbeSource kProbeSources[] = {ProbeSource::kUserId, ProbeSource::kItemId,
                                                ProbeSource::kTextual, ProbeSource::kVisual};
std::string_view ProbeSourceName(ProbeSource source);
// Accepts user_id, item_id, textual, visual.
ProbeSource ParseProbeSource(std::string_view name);

enum class ProbeMode {
  // Argmax of the model's own classifiers.
  kTrained,
  // A fresh softmax-regression probe fitted on the same vectors.
  kRefit,
};

struct ProbeAccuracy {
  double overall = 0.0;
  // Per chunk (chunk probe) or per attribute (value probe).
  std::vector<double> per_class;
  int samples = 0;
};

// Predicting the chunk index of every chunk of every entity of `source`.
ProbeAccuracy ChunkProbe(const model::AddrlModel& model, const model::ParameterStore& params,
                         ProbeSource source, ProbeMode mode = ProbeMode::kTrained);

// Per-attribute accuracy of predicting each item's value from fused chunk k.
ProbeAccuracy ValueProbe(const model::AddrlModel& model, const model::ParameterStore& params,
                         ProbeMode mode = ProbeMode::kTrained);

enum class Modality { kId = 0, kTextual = 1, kVisual = 2 };
inline constexpr std::string_view kModalityNames[] = {"id", "textual", "visual"};

// accuracy[a][b]: fraction of (item, k) for which chunk k of modality a has
// its largest dot product with chunk k of modality b (ties to the lower
// chunk index).
using RetrievalMatrix = std::array<std::array<double, 3>, 3>;
RetrievalMatrix CrossmodalRetrieval(const model::AddrlModel& model,
                                    const model::ParameterStore& params);

// Index of the largest entry, ties to the lowest index.
int ArgMax(std::span<const double> values);

// Multinomial logistic regression fitted by full-batch gradient descent from
// zero weights; deterministic. Returns the training-set accuracy of the fit
// on (features, labels), with features row-major (n, dim).
double RefitProbeAccuracy(std::span<const double> features, int dim,
                          std::span<const int> labels, int num_classes,
                          std::vector<double>* per_class_accuracy = nullptr,
                          int iterations = 300, double learning_rate = 0.5);

}  // namespace addrl::eval

#endif  // ADDRL_EVAL_PROBES_H_
