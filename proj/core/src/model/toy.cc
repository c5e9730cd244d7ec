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

#include "addrl/model/toy.h"

#include <string>

#include "addrl/data/split.h"
#include "addrl/random.h"

namespace addrl::model {

ToyProblem MakeToyProblem(std::uint64_t seed) {
  constexpr int kUsers = 4, kItems = 6, kD0 = 8, kPerUser = 3, kNeg = 2;
  const std::vector<int> sizes = {2, 3, 2};

  ToyProblem toy;
  data::Dataset& ds = toy.dataset;
  for (int u = 0; u < kUsers; ++u) {
    for (int j = 0; j < kPerUser; ++j) {
      ds.interactions.Add("u" + std::to_string(u),
                          "i" + std::to_string((u * 2 + j) % kItems));
    }
  }
  // Item indices follow first appearance, which here is 0..5 in order.
  auto features = [&](std::uint64_t stream) {
    CounterRng rng(seed, {stream});
    std::vector<double> v(kItems * kD0);
    for (double& x : v) x = rng.normal();
    return diff::Tensor::Matrix(kItems, kD0, std::move(v));
  };
  ds.textual = data::FeatureTable{data::Modality::kTextual, features(1)};
  ds.visual = data::FeatureTable{data::Modality::kVisual, features(2)};
  ds.attributes.labels = data::AttributeLabels(kItems, static_cast<int>(sizes.size()));
  for (int k = 0; k < static_cast<int>(sizes.size()); ++k) {
    data::Attribute attr{"attr" + std::to_string(k), {}};
    for (int v = 0; v < sizes[k]; ++v) attr.values.push_back("v" + std::to_string(v));
    ds.attributes.schema.attributes.push_back(attr);
    for (int i = 0; i < kItems; ++i) ds.attributes.labels.set(i, k, (i + k) % sizes[k]);
  }

  ModelConfig base;
  base.chunk_dim = 4;
  base.alpha = base.beta = base.gamma = 0.5;
  base.l2 = 0.01;
  base.temperature = 0.2;
  toy.config = ConfigForDataset(base, ds);
  toy.params = ParameterStore::Initialize(toy.config, kUsers, kItems, seed);

  const data::DatasetSplit split = data::SplitDataset(ds.interactions, seed);
  toy.batch.num_negatives = kNeg;
  std::uint64_t step = 0;
  for (const auto& [user, item] : split.TrainPairs()) {
    toy.batch.users.push_back(user);
    toy.batch.positives.push_back(item);
    for (int neg : data::SampleNegatives(split, user, kNeg, seed, step++))
      toy.batch.negatives.push_back(neg);
  }
  return toy;
}

std::vector<NamedGradCheck> ToyGradCheck(std::uint64_t seed, double eps) {
  ToyProblem toy = MakeToyProblem(seed);
  const AddrlModel model(toy.config, toy.dataset);
  std::vector<diff::NamedTensor> named;
  for (auto& [name, tensor] : toy.params.entries()) named.push_back({name, &tensor});

  const char* names[] = {"bpr", "intra", "inter", "low", "total"};
  std::vector<NamedGradCheck> out;
  for (int which = 0; which < 5; ++which) {
    auto loss = [&](diff::Tape& tape) {
      const BoundParams bound = BindParameters(tape, toy.params, toy.config);
      const LossGraph g = model.TotalLoss(tape, bound, toy.batch);
      const diff::Var parts[] = {g.bpr, g.intra, g.inter, g.low, g.total};
      return parts[which];
    };
    out.push_back({names[which], diff::GradCheck(loss, named, eps)});
  }
  return out;
}

}  // namespace addrl::model
