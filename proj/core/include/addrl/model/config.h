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

#ifndef ADDRL_MODEL_CONFIG_H_
#define ADDRL_MODEL_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

namespace addrl::data {
struct Dataset;
}

namespace addrl::model {

enum class Activation { kTanh, kSigmoid, kRelu, kIdentity };

std::string_view ActivationName(Activation a);
// Throws ConfigError for unknown names.
Activation ParseActivation(std::string_view name);

struct ModelConfig {
  // Named attributes K and their value counts A_k.
  int num_attributes = 4;
  std::vector<int> attribute_sizes;
  // Per-factor embedding size.
  int chunk_dim = 32;
  // Extra "others" chunk beyond the K attribute chunks.
  bool residual_chunk = true;
  int d0_textual = 0;
  int d0_visual = 0;
  // Contrastive temperature.
  double temperature = 0.2;
  // Nonlinearity of the modality projections.
  Activation activation = Activation::kTanh;
  // Weights of the intra, inter and low-level terms.
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  // L2 coefficient on batch-touched embedding rows.
  double l2 = 1e-4;
  // Optional L2 on dense weights (projections, classifiers, attention).
  double weight_decay = 0.0;
  // Cosine instead of raw dot-product similarity in the contrastive term.
  bool normalize_contrastive = false;
  // Whether the residual chunk takes part in cross-modal alignment.
  bool inter_include_residual = true;

  // C = K (+1 with the residual chunk).
  int num_chunks() const { return num_attributes + (residual_chunk ? 1 : 0); }
  // d = C * chunk_dim.
  int dim() const { return num_chunks() * chunk_dim; }

  // Throws ConfigError on inconsistent values.
  void Validate() const;
};

// Copies `base` and fills K, A_k and the feature sizes from the dataset.
ModelConfig ConfigForDataset(const ModelConfig& base, const data::Dataset& dataset);

}  // namespace addrl::model

#endif  // ADDRL_MODEL_CONFIG_H_
