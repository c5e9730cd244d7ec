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

#include "addrl/train/adam.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "test_util.h"

namespace addrl::train {
namespace {

using diff::Tensor;

model::ParameterStore Store(Tensor a, Tensor b) {
  model::ParameterStore s;
  s.Add("a", std::move(a));
  s.Add("b", std::move(b));
  return s;
}

TEST(AdamTest, FirstStepMovesByLearningRateTimesSign) {
  // At t = 1 the bias-corrected update is lr * g / (|g| + eps).
  const Tensor a0 = testing::RandomTensor({3, 2}, 1), b0 = testing::RandomTensor({4}, 2);
  model::ParameterStore s = Store(a0, b0);
  const Tensor ga = testing::RandomTensor({3, 2}, 3), gb = testing::RandomTensor({4}, 4);
  Adam adam(AdamConfig{.learning_rate = 0.01});
  const Tensor grads[] = {ga, gb};
  adam.Step(s, grads);
  EXPECT_EQ(adam.steps(), 1);
  for (std::size_t i = 0; i < a0.size(); ++i) {
    const double expected = a0[i] - 0.01 * ga[i] / (std::abs(ga[i]) + 1e-8);
    EXPECT_NEAR(s.Get("a")[i], expected, 1e-15);
  }
  for (std::size_t i = 0; i < b0.size(); ++i) {
    EXPECT_NEAR(s.Get("b")[i], b0[i] - 0.01 * gb[i] / (std::abs(gb[i]) + 1e-8), 1e-15);
  }
}

// Reference implementation over plain vectors.
struct ScalarAdam {
  double m = 0, v = 0;
  int t = 0;
  double Step(double x, double g, const AdamConfig& c) {
    ++t;
    m = c.beta1 * m + (1 - c.beta1) * g;
    v = c.beta2 * v + (1 - c.beta2) * g * g;
    const double mh = m / (1 - std::pow(c.beta1, t));
    const double vh = v / (1 - std::pow(c.beta2, t));
    return x - c.learning_rate * mh / (std::sqrt(vh) + c.epsilon);
  }
};

TEST(AdamTest, ManyStepsMatchReference) {
  const AdamConfig config{.learning_rate = 0.05, .beta1 = 0.8, .beta2 = 0.99, .epsilon = 1e-6};
  Adam adam(config);
  model::ParameterStore s;
  s.Add("x", Tensor::Vector({0.3, -1.2, 2.0}));
  std::vector<ScalarAdam> ref(3);
  std::vector<double> x = {0.3, -1.2, 2.0};
  for (int step = 0; step < 50; ++step) {
    const Tensor g = testing::RandomTensor({3}, 100 + step);
    adam.Step(s, std::span<const Tensor>(&g, 1));
    for (int i = 0; i < 3; ++i) x[i] = ref[i].Step(x[i], g[i], config);
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.Get("x")[i], x[i], 1e-12);
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  const Tensor a0 = testing::RandomTensor({2, 2}, 5), b0 = testing::RandomTensor({3}, 6);
  model::ParameterStore s = Store(a0, b0);
  Adam adam;
  const Tensor grads[] = {Tensor({2, 2}), Tensor({3})};
  for (int i = 0; i < 5; ++i) adam.Step(s, grads);
  EXPECT_EQ(s.Get("a"), a0);
  EXPECT_EQ(s.Get("b"), b0);
}

TEST(AdamTest, NonFiniteGradientThrowsBeforeAnyUpdate) {
  const Tensor a0 = testing::RandomTensor({2, 2}, 5), b0 = testing::RandomTensor({3}, 6);
  model::ParameterStore s = Store(a0, b0);
  Adam adam;
  Tensor bad({3});
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  const Tensor grads[] = {testing::RandomTensor({2, 2}, 7), bad};
  try {
    adam.Step(s, grads);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("b[1]"), std::string::npos) << e.what();
  }
  EXPECT_EQ(s.Get("a"), a0);
  EXPECT_EQ(adam.steps(), 0);
  bad[1] = std::numeric_limits<double>::infinity();
  const Tensor grads2[] = {testing::RandomTensor({2, 2}, 7), bad};
  EXPECT_THROW(adam.Step(s, grads2), NumericalError);
}

TEST(AdamTest, ShapeAndCountMismatch) {
  model::ParameterStore s = Store(Tensor({2, 2}), Tensor({3}));
  Adam adam;
  const Tensor one[] = {Tensor({2, 2})};
  EXPECT_THROW(adam.Step(s, one), ShapeError);
  const Tensor wrong[] = {Tensor({2, 2}), Tensor({4})};
  EXPECT_THROW(adam.Step(s, wrong), ShapeError);
}

TEST(AdamTest, Deterministic) {
  auto run = [] {
    model::ParameterStore s = Store(testing::RandomTensor({3, 3}, 1), testing::RandomTensor({2}, 2));
    Adam adam;
    for (int i = 0; i < 10; ++i) {
      const Tensor grads[] = {testing::RandomTensor({3, 3}, 10 + i),
                              testing::RandomTensor({2}, 20 + i)};
      adam.Step(s, grads);
    }
    return s;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace addrl::train
