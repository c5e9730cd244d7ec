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

#include "addrl/diff/grad_check.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "test_util.h"

namespace addrl::diff {
namespace {

TEST(GradCheckTest, QuadraticIsExact) {
  Tensor x = testing::RandomTensor({2, 3}, 1);
  const NamedTensor params[] = {{"x", &x}};
  const GradCheckResult r =
      GradCheck([&](Tape& t) { Var v = t.Watch(x); return Sum(Mul(v, v)); }, params);
  EXPECT_LT(r.max_rel_error, 1e-8);
  EXPECT_EQ(r.entries_checked, 6u);
}

TEST(GradCheckTest, DetectsWrongBackward) {
  Tensor x = Tensor::Vector({0.5, -1.0});
  const NamedTensor params[] = {{"x", &x}};
  // Claims d(sum x^2)/dx = x instead of 2x.
  auto wrong = [&](Tape& t) {
    Var v = t.Watch(x);
    Tensor y = Tensor::Scalar(x[0] * x[0] + x[1] * x[1]);
    return t.Record(std::move(y), {v}, [id = v.id()](const Tensor& g, Tape& tape) {
      Tensor& slot = tape.GradSlot(id);
      for (std::size_t i = 0; i < slot.size(); ++i) slot[i] += g.item() * tape.value(id)[i];
    });
  };
  const GradCheckResult r = GradCheck(wrong, params);
  EXPECT_GT(r.max_rel_error, 0.1);
  EXPECT_EQ(r.worst_param, "x");
}

TEST(GradCheckTest, EpsBounds) {
  Tensor x = Tensor::Vector({1.0});
  const NamedTensor params[] = {{"x", &x}};
  auto loss = [&](Tape& t) { return Sum(t.Watch(x)); };
  EXPECT_THROW(GradCheck(loss, params, 1e-9), ConfigError);
  EXPECT_THROW(GradCheck(loss, params, 1e-2), ConfigError);
  EXPECT_NO_THROW(GradCheck(loss, params, 1e-7));
}

TEST(GradCheckTest, NonFiniteLossNamesEntryAndRestoresFlags) {
  Tensor x = Tensor::Vector({1.0, 0.0});
  const NamedTensor params[] = {{"weights", &x}};
  // Infinite once x[1] is perturbed below zero.
  auto loss = [&](Tape& t) {
    Var v = t.Watch(x);
    Tensor y = Tensor::Scalar(x[1] < 0 ? std::numeric_limits<double>::infinity() : x[1]);
    return t.Record(std::move(y), {v}, [](const Tensor&, Tape&) {});
  };
  try {
    GradCheck(loss, params);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("weights[1]"), std::string::npos);
  }
  EXPECT_FALSE(x.requires_grad());
}

TEST(GradCheckTest, RestoresRequiresGrad) {
  Tensor x = Tensor::Vector({1.0});
  const NamedTensor params[] = {{"x", &x}};
  GradCheck([&](Tape& t) { return Sum(t.Watch(x)); }, params);
  EXPECT_FALSE(x.requires_grad());
}

}  // namespace
}  // namespace addrl::diff
