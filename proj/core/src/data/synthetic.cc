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

#include "addrl/data/synthetic.h"

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "addrl/error.h"
#include "addrl/random.h"

namespace addrl::data {
namespace {

enum Stream : std::uint64_t {
  kLabels = 1,
  kPreferences,
  kInteractions,
  kMixing,
  kNoise,
};

void ValidateSpec(const SyntheticSpec& spec) {
  if (spec.num_users < 1 || spec.num_items < 1) {
    throw ConfigError("synthetic spec needs at least one user and one item");
  }
  if (spec.attribute_sizes.empty()) {
    throw ConfigError("synthetic spec needs at least one attribute");
  }
  for (int a : spec.attribute_sizes) {
    if (a < 1) throw ConfigError("every attribute needs at least one value");
  }
  if (spec.d0_textual < 1 || spec.d0_visual < 1) {
    throw ConfigError("feature dimensions must be positive");
  }
  if (spec.interactions_per_user < 1) {
    throw ConfigError("interactions_per_user must be positive");
  }
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw ConfigError("noise must be a finite non-negative number");
  }
  if (spec.interactions_per_user > spec.num_items) {
    throw DataError(fmt::format("{} interactions per user exceed the {} items",
                                spec.interactions_per_user, spec.num_items));
  }
}

// (num_items x d0) features for raw item ids.
std::vector<double> MakeFeatures(const SyntheticSpec& spec,
                                 const std::vector<std::vector<int>>& labels,
                                 int d0, std::uint64_t seed, Modality modality) {
  const int num_attrs = static_cast<int>(spec.attribute_sizes.size());
  const int onehot_dim =
      std::accumulate(spec.attribute_sizes.begin(), spec.attribute_sizes.end(), 0);
  std::vector<int> offsets(num_attrs, 0);
  for (int k = 1; k < num_attrs; ++k)
    offsets[k] = offsets[k - 1] + spec.attribute_sizes[k - 1];

  const auto mod = static_cast<std::uint64_t>(modality);
  CounterRng mix_rng(seed, {kMixing, mod});
  std::vector<double> mixing(static_cast<std::size_t>(d0) * onehot_dim);
  for (double& m : mixing) m = mix_rng.normal();

  const double norm = 1.0 / std::sqrt(static_cast<double>(num_attrs));
  std::vector<double> out(static_cast<std::size_t>(spec.num_items) * d0);
  for (int i = 0; i < spec.num_items; ++i) {
    CounterRng noise_rng(seed, {kNoise, mod, static_cast<std::uint64_t>(i)});
    for (int r = 0; r < d0; ++r) {
      double v = 0.0;
      for (int k = 0; k < num_attrs; ++k) {
        v += mixing[static_cast<std::size_t>(r) * onehot_dim + offsets[k] + labels[i][k]];
      }
      v = v * norm + spec.noise * noise_rng.normal();
      out[static_cast<std::size_t>(i) * d0 + r] = v;
    }
  }
  return out;
}

}  // namespace

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  ValidateSpec(spec);
  const int num_attrs = static_cast<int>(spec.attribute_sizes.size());

  std::vector<std::vector<int>> labels(spec.num_items, std::vector<int>(num_attrs));
  for (int i = 0; i < spec.num_items; ++i) {
    CounterRng rng(seed, {kLabels, static_cast<std::uint64_t>(i)});
    for (int k = 0; k < num_attrs; ++k)
      labels[i][k] = static_cast<int>(rng.below(spec.attribute_sizes[k]));
  }

  SyntheticDataset out;
  out.preferred_values.assign(spec.num_users, std::vector<int>(num_attrs));
  std::vector<std::pair<int, int>> raw_pairs;
  std::vector<double> weights(spec.num_items);
  for (int u = 0; u < spec.num_users; ++u) {
    CounterRng pref_rng(seed, {kPreferences, static_cast<std::uint64_t>(u)});
    auto& pref = out.preferred_values[u];
    for (int k = 0; k < num_attrs; ++k)
      pref[k] = static_cast<int>(pref_rng.below(spec.attribute_sizes[k]));

    int positive = 0;
    for (int i = 0; i < spec.num_items; ++i) {
      int matches = 0;
      for (int k = 0; k < num_attrs; ++k) matches += labels[i][k] == pref[k];
      weights[i] = matches + spec.noise;
      positive += weights[i] > 0.0;
    }
    if (positive < spec.interactions_per_user) {
      throw DataError(fmt::format(
          "user {} can reach only {} items, fewer than {} interactions", u,
          positive, spec.interactions_per_user));
    }
    CounterRng pick_rng(seed, {kInteractions, static_cast<std::uint64_t>(u)});
    for (int n = 0; n < spec.interactions_per_user; ++n) {
      const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double target = pick_rng.uniform() * total;
      int chosen = -1;
      for (int i = 0; i < spec.num_items; ++i) {
        if (weights[i] <= 0.0) continue;
        chosen = i;
        target -= weights[i];
        if (target < 0.0) break;
      }
      raw_pairs.emplace_back(u, chosen);
      weights[chosen] = 0.0;
    }
  }

  Dataset& ds = out.dataset;
  for (const auto& [u, i] : raw_pairs) {
    ds.interactions.Add("u" + std::to_string(u), "i" + std::to_string(i));
  }
  const int n_items = ds.interactions.num_items();
  std::vector<int> raw_of(n_items);
  for (int idx = 0; idx < n_items; ++idx) {
    raw_of[idx] = std::stoi(ds.interactions.items.token(idx).substr(1));
  }

  auto permute = [&](const std::vector<double>& raw, int d0) {
    std::vector<double> rows(static_cast<std::size_t>(n_items) * d0);
    for (int idx = 0; idx < n_items; ++idx)
      std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(raw_of[idx]) * d0, d0,
                  rows.begin() + static_cast<std::ptrdiff_t>(idx) * d0);
    return diff::Tensor::Matrix(n_items, d0, std::move(rows));
  };
  ds.textual = FeatureTable{
      Modality::kTextual,
      permute(MakeFeatures(spec, labels, spec.d0_textual, seed, Modality::kTextual),
              spec.d0_textual)};
  ds.visual = FeatureTable{
      Modality::kVisual,
      permute(MakeFeatures(spec, labels, spec.d0_visual, seed, Modality::kVisual),
              spec.d0_visual)};

  // Value order follows first appearance in item order, which is what the
  // attribute loader infers; values no item carries go last.
  AttributeSchema& schema = ds.attributes.schema;
  ds.attributes.labels = AttributeLabels(n_items, num_attrs);
  for (int k = 0; k < num_attrs; ++k) {
    std::vector<int> remap(spec.attribute_sizes[k], -1);
    Attribute attr{"attr" + std::to_string(k), {}};
    auto intern = [&](int raw) {
      if (remap[raw] < 0) {
        remap[raw] = attr.num_values();
        attr.values.push_back("v" + std::to_string(raw));
      }
      return remap[raw];
    };
    for (int idx = 0; idx < n_items; ++idx)
      ds.attributes.labels.set(idx, k, intern(labels[raw_of[idx]][k]));
    for (int raw = 0; raw < spec.attribute_sizes[k]; ++raw) intern(raw);
    for (auto& pref : out.preferred_values) pref[k] = remap[pref[k]];
    schema.attributes.push_back(std::move(attr));
  }
  return out;
}

}  // namespace addrl::data
