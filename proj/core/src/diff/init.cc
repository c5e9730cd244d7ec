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

#include "addrl/diff/init.h"

#include <cmath>

#include <fmt/format.h>

#include "addrl/error.h"
#include "addrl/random.h"

namespace addrl::diff {

double XavierBound(const Shape& shape) {
  if (shape.empty() || shape.size() > 2) {
    throw ShapeError(fmt::format("Xavier init needs rank 1 or 2, got {}",
                                 ShapeString(shape)));
  }
  for (std::size_t d : shape) {
    if (d == 0) {
      throw ShapeError(fmt::format("Xavier init: zero-sized dimension in {}",
                                   ShapeString(shape)));
    }
  }
  const double fan_in = static_cast<double>(shape.back());
  const double fan_out = static_cast<double>(shape.front());
  return std::sqrt(6.0 / (fan_in + fan_out));
}

Tensor XavierInit(const Shape& shape, std::uint64_t seed) {
  const double bound = XavierBound(shape);
  Tensor t(shape);
  CounterRng rng(seed, {0x58415649ULL});  // "XAVI"
  for (double& v : t.mutable_data()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace addrl::diff
