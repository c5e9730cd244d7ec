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

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "addrl/model/toy.h"
#include "test_util.h"

namespace addrl::eval {
namespace {

void ZeroAll(model::ParameterStore& params) {
  for (auto& [name, t] : params.entries())
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.0;
}

TEST(ArgMaxTest, LowestIndexWinsTies) {
  EXPECT_EQ(ArgMax(std::vector<double>{1, 3, 3, 2}), 1);
  EXPECT_EQ(ArgMax(std::vector<double>{0, 0, 0}), 0);
  EXPECT_EQ(ArgMax(std::vector<double>{-5}), 0);
}

TEST(ProbeSourceTest, NamesRoundTrip) {
  for (ProbeSource s : kProbeSources) EXPECT_EQ(ParseProbeSource(ProbeSourceName(s)), s);
  EXPECT_THROW(ParseProbeSource("fused"), ConfigError);
}

TEST(ProbesTest, ZeroModelSitsAtTieBreakChance) {
  model::ToyProblem toy = model::MakeToyProblem(2);
  ZeroAll(toy.params);
  const model::AddrlModel m(toy.config, toy.dataset);
  const int c = toy.config.num_chunks();
  for (ProbeSource s : kProbeSources) {
    const ProbeAccuracy a = ChunkProbe(m, toy.params, s);
    EXPECT_DOUBLE_EQ(a.overall, 1.0 / c) << ProbeSourceName(s);
    EXPECT_EQ(a.per_class[0], 1.0);
    for (int k = 1; k < c; ++k) EXPECT_EQ(a.per_class[k], 0.0);
  }
  const ProbeAccuracy v = ValueProbe(m, toy.params);
  ASSERT_EQ(v.per_class.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const auto labels = toy.dataset.labels().Column(k);
    const double zeros = static_cast<double>(std::count(labels.begin(), labels.end(), 0));
    EXPECT_DOUBLE_EQ(v.per_class[k], zeros / labels.size());
  }
  const RetrievalMatrix r = CrossmodalRetrieval(m, toy.params);
  for (const auto& row : r)
    for (double x : row) EXPECT_DOUBLE_EQ(x, 1.0 / c);
}

TEST(ProbesTest, OrthogonalChunksAreRetrievedPerfectly) {
  model::ToyProblem toy = model::MakeToyProblem(2);
  ZeroAll(toy.params);
  auto& items = toy.params.Get(model::param::kItemEmbedding);
  const int c = toy.config.num_chunks(), w = toy.config.chunk_dim;
  ASSERT_LE(c, w);
  for (std::size_t i = 0; i < items.rows(); ++i)
    for (int k = 0; k < c; ++k) items.at(i, k * w + k) = 1.0 + i;
  const model::AddrlModel m(toy.config, toy.dataset);
  EXPECT_EQ(CrossmodalRetrieval(m, toy.params)[0][0], 1.0);
  // Intra classifier rows aligned with the same axes make the trained probe exact.
  auto& iw = toy.params.Get(model::param::IntraWeight("item"));
  for (int k = 0; k < c; ++k) iw.at(k, k) = 1.0;
  EXPECT_EQ(ChunkProbe(m, toy.params, ProbeSource::kItemId).overall, 1.0);
  EXPECT_EQ(ChunkProbe(m, toy.params, ProbeSource::kItemId, ProbeMode::kRefit).overall, 1.0);
}

TEST(RefitProbeTest, SeparableSingleClassAndErrors) {
  // Two well-separated clusters on a line.
  const std::vector<double> x = {-2.0, -1.5, -1.0, 1.0, 1.5, 2.0};
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  std::vector<double> per_class;
  EXPECT_EQ(RefitProbeAccuracy(x, 1, y, 2, &per_class), 1.0);
  EXPECT_EQ(per_class, (std::vector<double>{1.0, 1.0}));
  const std::vector<int> one(6, 0);
  EXPECT_EQ(RefitProbeAccuracy(x, 1, one, 1), 1.0);
  EXPECT_THROW(RefitProbeAccuracy(x, 2, y, 2), ShapeError);
}

TEST(ProbesTest, SingleValueAttributeIsAlwaysRight) {
  model::ToyProblem toy = model::MakeToyProblem(3);
  toy.dataset.attributes.schema.attributes[0].values = {"only"};
  for (int i = 0; i < toy.dataset.num_items(); ++i) toy.dataset.attributes.labels.set(i, 0, 0);
  toy.config.attribute_sizes[0] = 1;
  toy.params = model::ParameterStore::Initialize(toy.config, 4, 6, 3);
  const model::AddrlModel m(toy.config, toy.dataset);
  EXPECT_EQ(ValueProbe(m, toy.params).per_class[0], 1.0);
  EXPECT_EQ(ValueProbe(m, toy.params, ProbeMode::kRefit).per_class[0], 1.0);
}

}  // namespace
}  // namespace addrl::eval
