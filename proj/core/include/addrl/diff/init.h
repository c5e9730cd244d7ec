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

#ifndef ADDRL_DIFF_INIT_H_
#define ADDRL_DIFF_INIT_H_

#include <cstdint>

#include "addrl/diff/tensor.h"

namespace addrl::diff {

// Xavier/Glorot uniform initialisation: entries drawn from U[-b, b] with
// b = sqrt(6 / (fan_in + fan_out)). For a (rows, cols) weight the fans are
// (cols, rows); a rank-1 tensor of length n uses n for both.
// Deterministic in (shape, seed).
Tensor XavierInit(const Shape& shape, std::uint64_t seed);

double XavierBound(const Shape& shape);

}  // namespace addrl::diff

#endif  // ADDRL_DIFF_INIT_H_
