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

#include "addrl/eval/probes.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::eval {
namespace {

// Row-wise argmax of x W^T + b for row-major x of width dim.
int Classify(std::span<const double> x, const diff::Tensor& weight, const diff::Tensor& bias,
             std::vector<double>& logits) {
  const std::size_t classes = weight.rows();
  logits.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const auto w = weight.row(c);
    double z = bias[c];
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
    logits[c] = z;
  }
  return ArgMax(logits);
}

const diff::Tensor& SourceTable(const model::ItemRepresentations& items,
                                const model::ParameterStore& params, ProbeSource source) {
  switch (source) {
    case ProbeSource::kUserId:
      return params.Get(model::param::kUserEmbedding);
    case ProbeSource::kItemId:
      return items.id;
    case ProbeSource::kTextual:
      return items.textual;
    case ProbeSource::kVisual:
      return items.visual;
  }
  return items.id;
}

}  // namespace

std::string_view ProbeSourceName(ProbeSource source) {
  switch (source) {
    case ProbeSource::kUserId:
      return "user_id";
    case ProbeSource::kItemId:
      return "item_id";
    case ProbeSource::kTextual:
      return "textual";
    case ProbeSource::kVisual:
      return "visual";
  }
  return "?";
}

ProbeSource ParseProbeSource(std::string_view name) {
  for (ProbeSource s : kProbeSources) {
    if (ProbeSourceName(s) == name) return s;
  }
  throw ConfigError(fmt::format(
      "unknown probe source '{}' (expected user_id, item_id, textual or visual)", name));
}

int ArgMax(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ProbeAccuracy ChunkProbe(const model::AddrlModel& model, const model::ParameterStore& params,
                         ProbeSource source, ProbeMode mode) {
  const model::ModelConfig& config = model.config();
  const model::ItemRepresentations items = source == ProbeSource::kUserId
                                               ? model::ItemRepresentations{}
                                               : model.ComputeItemRepresentations(params);
  const diff::Tensor& table = SourceTable(items, params, source);
  const int chunks = config.num_chunks();
  const int width = config.chunk_dim;
  const int entities = static_cast<int>(table.rows());

  ProbeAccuracy out;
  out.samples = entities * chunks;
  out.per_class.assign(chunks, 0.0);
  if (mode == ProbeMode::kRefit) {
    std::vector<int> labels(out.samples);
    for (int r = 0; r < out.samples; ++r) labels[r] = r % chunks;
    out.overall = RefitProbeAccuracy(table.data(), width, labels, chunks, &out.per_class);
    return out;
  }

  const auto index = static_cast<std::size_t>(source);
  const diff::Tensor& weight =
      params.Get(model::param::IntraWeight(model::param::kIntraSources[index]));
  const diff::Tensor& bias =
      params.Get(model::param::IntraBias(model::param::kIntraSources[index]));
  std::vector<double> logits;
  int correct = 0;
  for (int n = 0; n < entities; ++n) {
    const auto row = table.row(n);
    for (int k = 0; k < chunks; ++k) {
      if (Classify(row.subspan(static_cast<std::size_t>(k) * width, width), weight, bias,
                   logits) == k) {
        ++correct;
        out.per_class[k] += 1.0;
      }
    }
  }
  for (double& a : out.per_class) a /= entities;
  out.overall = static_cast<double>(correct) / out.samples;
  return out;
}

ProbeAccuracy ValueProbe(const model::AddrlModel& model, const model::ParameterStore& params,
                         ProbeMode mode) {
  const model::ModelConfig& config = model.config();
  const model::ItemRepresentations items = model.ComputeItemRepresentations(params);
  const data::AttributeLabels& labels = model.dataset().labels();
  const int num_items = static_cast<int>(items.fused.rows());
  const int width = config.chunk_dim;

  ProbeAccuracy out;
  out.samples = num_items;
  std::vector<double> logits;
  for (int k = 0; k < config.num_attributes; ++k) {
    if (mode == ProbeMode::kRefit) {
      std::vector<double> features(static_cast<std::size_t>(num_items) * width);
      for (int i = 0; i < num_items; ++i) {
        const auto chunk = items.fused.row(i).subspan(static_cast<std::size_t>(k) * width, width);
        std::copy(chunk.begin(), chunk.end(), features.begin() + static_cast<std::ptrdiff_t>(i) * width);
      }
      out.per_class.push_back(RefitProbeAccuracy(features, width, labels.Column(k),
                                                 config.attribute_sizes[k]));
      continue;
    }
    const diff::Tensor& weight = params.Get(model::param::LowWeight(k));
    const diff::Tensor& bias = params.Get(model::param::LowBias(k));
    int correct = 0;
    for (int i = 0; i < num_items; ++i) {
      const auto chunk = items.fused.row(i).subspan(static_cast<std::size_t>(k) * width, width);
      correct += Classify(chunk, weight, bias, logits) == labels.at(i, k);
    }
    out.per_class.push_back(static_cast<double>(correct) / num_items);
  }
  double sum = 0.0;
  for (double a : out.per_class) sum += a;
  out.overall = sum / static_cast<double>(out.per_class.size());
  return out;
}

RetrievalMatrix CrossmodalRetrieval(const model::AddrlModel& model,
                                    const model::ParameterStore& params) {
  const model::ModelConfig& config = model.config();
  const model::ItemRepresentations items = model.ComputeItemRepresentations(params);
  const diff::Tensor* tables[] = {&items.id, &items.textual, &items.visual};
  const int chunks = config.num_chunks();
  const std::size_t width = config.chunk_dim;
  const int num_items = static_cast<int>(items.id.rows());

  RetrievalMatrix out{};
  std::vector<double> sims(chunks);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      int correct = 0;
      for (int i = 0; i < num_items; ++i) {
        const auto x = tables[a]->row(i);
        const auto y = tables[b]->row(i);
        for (int k = 0; k < chunks; ++k) {
          for (int j = 0; j < chunks; ++j) {
            double dot = 0.0;
            for (std::size_t e = 0; e < width; ++e) dot += x[k * width + e] * y[j * width + e];
            sims[j] = dot;
          }
          correct += ArgMax(sims) == k;
        }
      }
      out[a][b] = static_cast<double>(correct) / (static_cast<double>(num_items) * chunks);
    }
  }
  return out;
}

double RefitProbeAccuracy(std::span<const double> features, int dim,
                          std::span<const int> labels, int num_classes,
                          std::vector<double>* per_class_accuracy, int iterations,
                          double learning_rate) {
  const std::size_t n = labels.size();
  if (dim < 1 || num_classes < 1 || features.size() != n * dim || n == 0) {
    throw ShapeError(fmt::format("refit probe: {} features for {} labels of width {}",
                                 features.size(), n, dim));
  }
  const std::size_t c_count = num_classes;
  std::vector<double> w(c_count * dim, 0.0), b(c_count, 0.0);
  std::vector<double> gw(w.size()), gb(c_count), p(c_count);
  auto logits_of = [&](std::size_t r) {
    const double* x = &features[r * dim];
    for (std::size_t c = 0; c < c_count; ++c) {
      double z = b[c];
      for (int j = 0; j < dim; ++j) z += w[c * dim + j] * x[j];
      p[c] = z;
    }
  };
  for (int it = 0; it < iterations; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      logits_of(r);
      const double m = *std::max_element(p.begin(), p.end());
      double z = 0.0;
      for (double& v : p) z += (v = std::exp(v - m));
      const double* x = &features[r * dim];
      for (std::size_t c = 0; c < c_count; ++c) {
        const double d = p[c] / z - (static_cast<int>(c) == labels[r] ? 1.0 : 0.0);
        gb[c] += d;
        for (int j = 0; j < dim; ++j) gw[c * dim + j] += d * x[j];
      }
    }
    const double step = learning_rate / static_cast<double>(n);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * gw[i];
    for (std::size_t c = 0; c < c_count; ++c) b[c] -= step * gb[c];
  }
  std::vector<double> hits(c_count, 0.0), totals(c_count, 0.0);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    logits_of(r);
    const bool ok = ArgMax(p) == labels[r];
    correct += ok;
    totals[labels[r]] += 1.0;
    hits[labels[r]] += ok;
  }
  if (per_class_accuracy) {
    per_class_accuracy->assign(c_count, 0.0);
    for (std::size_t c = 0; c < c_count; ++c)
      if (totals[c] > 0) (*per_class_accuracy)[c] = hits[c] / totals[c];
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace addrl::eval
