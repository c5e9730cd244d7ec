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

// Closed-form values of every loss term at all-zero parameters.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "addrl/model/addrl_model.h"
#include "addrl/model/toy.h"
#include "test_util.h"

namespace addrl::model {
namespace {

using diff::Tape;
using diff::Tensor;

constexpr double kTol = 1e-12;

void ZeroAll(ParameterStore& params) {
  for (auto& [name, t] : params.entries())
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.0;
}

class ZeroParamsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    toy_ = MakeToyProblem(1);
    toy_.config.l2 = 0.0;
    ZeroAll(toy_.params);
  }
  LossReport Report() {
    const AddrlModel model(toy_.config, toy_.dataset);
    Tape tape;
    return model.TotalLoss(tape, BindParameters(tape, toy_.params, toy_.config), toy_.batch)
        .report;
  }
  int C() const { return toy_.config.num_chunks(); }
  double B() const { return static_cast<double>(toy_.batch.size()); }
  ToyProblem toy_;
};

TEST_F(ZeroParamsTest, IntraPerChunkIsLogC) {
  const double per_chunk = Report().intra / (4.0 * B() * C());
  EXPECT_NEAR(per_chunk, std::log(C()), kTol);
}

TEST_F(ZeroParamsTest, InterPerDirectionalTermIsLogC) {
  const double per_term = Report().inter / (3.0 * 2.0 * B() * C());
  EXPECT_NEAR(per_term, std::log(C()), kTol);
}

TEST_F(ZeroParamsTest, InterWithoutResidualUsesK) {
  toy_.config.inter_include_residual = false;
  const int k = toy_.config.num_attributes;
  const double per_term = Report().inter / (3.0 * 2.0 * B() * k);
  EXPECT_NEAR(per_term, std::log(k), kTol);
}

TEST_F(ZeroParamsTest, BprPerTripletIsLog2) {
  const double per_triplet = Report().bpr / (B() * toy_.batch.num_negatives);
  EXPECT_NEAR(per_triplet, std::numbers::ln2, kTol);
}

TEST_F(ZeroParamsTest, LowIsSumOfLogA) {
  double expected = 0.0;
  for (int a : toy_.config.attribute_sizes) expected += B() * std::log(a);
  EXPECT_NEAR(Report().low, expected, kTol * expected);
}

TEST_F(ZeroParamsTest, PerChunkScoreIsLog2) {
  const AddrlModel model(toy_.config, toy_.dataset);
  const ItemRepresentations rep = model.ComputeItemRepresentations(toy_.params);
  const Tensor& users = toy_.params.Get(param::kUserEmbedding);
  for (std::size_t u = 0; u < users.rows(); ++u) {
    for (std::size_t i = 0; i < rep.fused.rows(); ++i) {
      const ScoreBreakdown b = MakeBreakdown(users.row(u), rep.fused.row(i), toy_.config);
      for (double p : b.parts) ASSERT_NEAR(p, std::numbers::ln2, kTol);
      ASSERT_NEAR(b.total, C() * std::numbers::ln2, kTol);
    }
  }
  for (std::size_t r = 0; r < rep.attention.rows(); ++r)
    for (std::size_t j = 0; j < 3; ++j) ASSERT_NEAR(rep.attention.at(r, j), 1.0 / 3, kTol);
}

TEST(InterIdentityTest, EqualSimilaritiesGiveLogCForAnyValues) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ModelConfig c;
    c.num_attributes = 1 + static_cast<int>(seed % 4);
    c.attribute_sizes.assign(c.num_attributes, 2);
    c.chunk_dim = 3;
    c.d0_textual = c.d0_visual = 1;
    // Every chunk of an entity holds the same vector, so all C similarities tie.
    const Tensor base_a = testing::RandomTensor({5, 3}, seed);
    const Tensor base_b = testing::RandomTensor({5, 3}, seed + 99);
    Tensor a({5, static_cast<std::size_t>(c.dim())}), b = a;
    for (std::size_t n = 0; n < 5; ++n)
      for (int k = 0; k < c.num_chunks(); ++k)
        for (std::size_t d = 0; d < 3; ++d) {
          a.at(n, k * 3 + d) = base_a.at(n, d);
          b.at(n, k * 3 + d) = base_b.at(n, d);
        }
    Tape tape;
    const double v = InterModalityPairLoss(ChunkVector(tape.Constant(a), c),
                                           ChunkVector(tape.Constant(b), c), c)
                         .value()
                         .item();
    const double terms = 2.0 * 5 * c.num_chunks();
    EXPECT_NEAR(v / terms, std::log(c.num_chunks()), kTol) << "seed " << seed;
  }
}

TEST(TotalIdentityTest, ZeroWeightsGiveBprBitwise) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ToyProblem toy = MakeToyProblem(seed);
    toy.config.alpha = toy.config.beta = toy.config.gamma = 0.0;
    const AddrlModel model(toy.config, toy.dataset);
    for (bool prune : {false, true}) {
      Tape tape;
      const LossGraph g = model.TotalLoss(
          tape, BindParameters(tape, toy.params, toy.config), toy.batch, {prune});
      EXPECT_EQ(g.report.total, g.report.bpr) << "seed " << seed;
      EXPECT_EQ(g.total.value().item(), g.bpr.value().item());
    }
  }
}

}  // namespace
}  // namespace addrl::model
