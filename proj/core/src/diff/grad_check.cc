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

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::diff {
namespace {

double Evaluate(const LossBuilder& loss) {
  Tape tape;
  return loss(tape).value().item();
}

}  // namespace

GradCheckResult GradCheck(const LossBuilder& loss,
                          std::span<const NamedTensor> params, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) {
    throw ConfigError(fmt::format("grad check eps must lie in [1e-7, 1e-3], got {}", eps));
  }
  std::vector<bool> saved_flags;
  for (const NamedTensor& p : params) {
    saved_flags.push_back(p.tensor->requires_grad());
    p.tensor->set_requires_grad(true);
  }
  struct Restore {
    std::span<const NamedTensor> params;
    const std::vector<bool>& flags;
    ~Restore() {
      for (std::size_t i = 0; i < params.size(); ++i)
        params[i].tensor->set_requires_grad(flags[i]);
    }
  } restore{params, saved_flags};

  std::vector<Tensor> analytic;
  {
    Tape tape;
    Var l = loss(tape);
    Gradients grads = tape.Backward(l);
    for (const NamedTensor& p : params) {
      analytic.push_back(grads.contains(*p.tensor) ? grads.of(*p.tensor)
                                                   : Tensor(p.tensor->shape()));
    }
  }

  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& t = *params[pi].tensor;
    for (std::size_t e = 0; e < t.size(); ++e) {
      const double original = t[e];
      t[e] = original + eps;
      const double plus = Evaluate(loss);
      t[e] = original - eps;
      const double minus = Evaluate(loss);
      t[e] = original;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw NumericalError(fmt::format(
            "non-finite loss while perturbing {}[{}]", params[pi].name, e));
      }
      const double fd = (plus - minus) / (2.0 * eps);
      const double ad = analytic[pi][e];
      const double err =
          std::abs(ad - fd) / std::max({1.0, std::abs(ad), std::abs(fd)});
      ++result.entries_checked;
      if (err > result.max_rel_error || result.worst_param.empty()) {
        result.max_rel_error = std::max(result.max_rel_error, err);
        result.worst_param = params[pi].name;
        result.worst_index = e;
        result.analytic = ad;
        result.numeric = fd;
      }
    }
  }

  return result;
}

}  // namespace addrl::diff
