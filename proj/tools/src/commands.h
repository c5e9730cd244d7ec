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

#ifndef ADDRL_TOOLS_COMMANDS_H_
#define ADDRL_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "addrl/cli/cli.h"
#include "addrl/data/synthetic.h"

namespace addrl::cli {

void GenSynthetic(const RunConfig& config, const data::SyntheticSpec& spec,
                  std::ostream& out);

void TrainCommand(const RunConfig& config, std::ostream& out);

struct EvaluateOptions {
  std::vector<int> ns = {10, 20, 50};
  bool refit_probes = false;
};
void Evaluate(const RunConfig& config, const EvaluateOptions& options, std::ostream& out);

struct RecommendOptions {
  std::vector<std::string> users;
  int n = 20;
  // Interpretability CSV for every recommended pair, when set.
  std::string explain;
};
void Recommend(const RunConfig& config, const RecommendOptions& options, std::ostream& out);

struct WhatIfOptions {
  std::string attribute;
  std::vector<double> xis = {2.0, 1.0, 0.5, 0.0, -1.0};
  std::vector<std::string> users;
  // Cohort mode: users most concentrated on this value of the attribute.
  std::string cohort_value;
  int cohort_size = 100;
  int n = 20;
};
void WhatIf(const RunConfig& config, const WhatIfOptions& options, std::ostream& out);

struct AblateOptions {
  std::vector<std::string> variants;
  int n = 20;
};
void Ablate(const RunConfig& config, const AblateOptions& options, std::ostream& out);

void Grid(const RunConfig& config, std::ostream& out);

void Export(const RunConfig& config, const std::string& what, std::ostream& out);

struct GradCheckOptions {
  double eps = 1e-5;
  double tolerance = 1e-4;
};
// Returns kExitOk or kExitNumerical.
int GradCheckCommand(const RunConfig& config, const GradCheckOptions& options,
                     std::ostream& out);

}  // namespace addrl::cli

#endif  // ADDRL_TOOLS_COMMANDS_H_
