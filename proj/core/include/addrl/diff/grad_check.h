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

#ifndef ADDRL_DIFF_GRAD_CHECK_H_
#define ADDRL_DIFF_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "addrl/diff/tape.h"

namespace addrl::diff {

struct NamedTensor {
  std::string name;
  Tensor* tensor = nullptr;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t entries_checked = 0;
};

// Builds a scalar loss on the given tape. Parameters must be registered
// through Tape::Watch so that perturbations are visible.
using LossBuilder = std::function<Var(Tape&)>;

// Compares tape gradients with central differences
// (f(x+eps) - f(x-eps)) / (2 eps) for every entry of every parameter.
// The per-entry error is |g_ad - g_fd| / max(1, |g_ad|, |g_fd|).
//
// Parameters are perturbed in place and restored; their requires_grad flag
// is forced on for the duration of the check. Throws NumericalError when a
// perturbed loss is non-finite.
GradCheckResult GradCheck(const LossBuilder& loss,
                          std::span<const NamedTensor> params,
                          double eps = 1e-5);

}  // namespace addrl::diff

#endif  // ADDRL_DIFF_GRAD_CHECK_H_
