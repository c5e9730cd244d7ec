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

#ifndef ADDRL_CLI_CLI_H_
#define ADDRL_CLI_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "addrl/model/config.h"
#include "addrl/train/config.h"

namespace addrl::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

// Everything a command can be configured with: model and training settings,
// paths and run options. Populated from the config file, then flags.
struct RunConfig {
  model::ModelConfig model;
  train::TrainConfig train;
  train::GridSpec grid;
  std::string data_dir;
  int kcore = 0;
  std::string out;
  std::string checkpoint;
  int jobs = 1;
  bool no_banner = false;
};

// Runs the command line `args` (without the program name), writing the
// human-readable summary to `out` and diagnostics to `err`. Returns the
// process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace addrl::cli

#endif  // ADDRL_CLI_CLI_H_
