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

#include "addrl/cli/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "addrl/error.h"
#include "commands.h"

namespace addrl::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

void AddModelOptions(CLI::App& app, RunConfig& c) {
  model::ModelConfig& m = c.model;
  auto* g = "Model";
  app.add_option("--chunk-dim", m.chunk_dim, "Size of each attribute chunk")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option("--residual-chunk", m.residual_chunk,
                 "Add an 'others' chunk after the attribute chunks")->group(g);
  app.add_option("--temperature", m.temperature, "Contrastive temperature")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option_function<std::string>(
         "--activation", [&m](const std::string& v) { m.activation = model::ParseActivation(v); },
         "Projection nonlinearity")
      ->group(g)
      ->check(CLI::IsMember({"tanh", "sigmoid", "relu", "identity"}))
      ->default_str("tanh");
  app.add_option("--alpha", m.alpha, "Weight of the intra-modality term")->group(g);
  app.add_option("--beta", m.beta, "Weight of the inter-modality term")->group(g);
  app.add_option("--gamma", m.gamma, "Weight of the attribute-value term")->group(g);
  app.add_option("--l2", m.l2, "L2 on batch embedding rows")->group(g);
  app.add_option("--weight-decay", m.weight_decay, "L2 on dense weights")->group(g);
  app.add_option("--normalize-contrastive", m.normalize_contrastive,
                 "Cosine similarity in the contrastive term")->group(g);
  app.add_option("--inter-include-residual", m.inter_include_residual,
                 "Align the residual chunk across modalities")->group(g);
}

void AddTrainOptions(CLI::App& app, RunConfig& c) {
  train::TrainConfig& t = c.train;
  auto* g = "Training";
  app.add_option("--learning-rate", t.learning_rate, "Adam learning rate")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option("--batch-size", t.batch_size, "Positives per batch")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option("--num-negatives", t.num_negatives, "Negatives per positive")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option("--max-epochs", t.max_epochs, "Epoch limit")->group(g)->check(CLI::NonNegativeNumber);
  app.add_option("--eval-every", t.eval_every, "Validation and checkpoint interval (epochs)")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option("--patience", t.patience,
                 "Stop after this many epochs without a better validation recall")->group(g);
  app.add_option("--eval-n", t.eval_n, "Cut-off of the validation metric")
      ->group(g)->check(CLI::PositiveNumber);
  app.add_option("--seed", t.seed, "Seed for initialisation, sampling, splits and data");
  app.add_option("--prune-zero-weight-terms", t.prune_zero_weight_terms,
                 "Leave zero-weight loss terms out of the graph")->group(g);
  app.add_option("--checkpoint-dir", t.checkpoint_dir,
                 "Periodic checkpoints (default: <out>/checkpoints)")->group(g);
  app.add_flag("--disable-intra", t.ablation.disable_intra, "Zero alpha")->group(g);
  app.add_flag("--disable-inter", t.ablation.disable_inter, "Zero beta")->group(g);
  app.add_flag("--disable-high", t.ablation.disable_high, "Zero alpha and beta")->group(g);
  app.add_flag("--disable-low", t.ablation.disable_low, "Zero gamma")->group(g);
  app.add_flag("--disable-all-disentangling", t.ablation.disable_all_disentangling,
               "Zero alpha, beta and gamma")->group(g);
}

void AddGridOptions(CLI::App& app, RunConfig& c) {
  auto* g = "Grid";
  app.add_option("--grid-alpha", c.grid.alpha, "Alpha values")->group(g)->delimiter(',');
  app.add_option("--grid-beta", c.grid.beta, "Beta values")->group(g)->delimiter(',');
  app.add_option("--grid-gamma", c.grid.gamma, "Gamma values")->group(g)->delimiter(',');
  app.add_option("--grid-l2", c.grid.l2, "L2 values")->group(g)->delimiter(',');
  app.add_option("--grid-temperature", c.grid.temperature, "Temperature values")
      ->group(g)->delimiter(',');
}

void AddRunOptions(CLI::App& app, RunConfig& c) {
  auto* g = "Paths";
  app.add_option("--data", c.data_dir, "Dataset directory")->group(g);
  app.add_option("--kcore", c.kcore, "k-core filter applied when loading (0 = off)")
      ->group(g)->check(CLI::NonNegativeNumber);
  app.add_option("--out", c.out, "Output directory or file")->group(g);
  app.add_option("--checkpoint", c.checkpoint, "Checkpoint to read")->group(g);
  app.add_option("--jobs", c.jobs, "Concurrent trainings for grid and ablate")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-banner", c.no_banner, "Suppress the timestamped banner line");
}

std::string Banner() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("# addrl {} {:%Y-%m-%dT%H:%M:%S}Z", kVersion,
                     std::chrono::floor<std::chrono::seconds>(now));
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Attribute-disentangled multimodal recommender", "addrl"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML config file; flags override its values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  AddModelOptions(app, config);
  AddTrainOptions(app, config);
  AddGridOptions(app, config);
  AddRunOptions(app, config);

  data::SyntheticSpec spec;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a planted-structure dataset to --out");
  gen->add_option("--users", spec.num_users)->check(CLI::PositiveNumber);
  gen->add_option("--items", spec.num_items)->check(CLI::PositiveNumber);
  gen->add_option("--attribute-sizes", spec.attribute_sizes)->delimiter(',');
  gen->add_option("--d0-textual", spec.d0_textual)->check(CLI::PositiveNumber);
  gen->add_option("--d0-visual", spec.d0_visual)->check(CLI::PositiveNumber);
  gen->add_option("--per-user", spec.interactions_per_user)->check(CLI::PositiveNumber);
  gen->add_option("--noise", spec.noise)->check(CLI::NonNegativeNumber);

  auto* train_cmd = app.add_subcommand("train", "Train on --data and write to --out");

  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Metrics and probes of a checkpoint");
  evaluate->add_option("-n", eval_opts.ns, "Cut-offs")->delimiter(',');
  evaluate->add_flag("--refit-probes", eval_opts.refit_probes,
                     "Fit fresh linear probes instead of using the model's classifiers");

  RecommendOptions rec_opts;
  auto* recommend = app.add_subcommand("recommend", "Top-n items for users");
  recommend->add_option("--user", rec_opts.users, "User token (repeatable)");
  recommend->add_option("-n", rec_opts.n)->check(CLI::PositiveNumber);
  recommend->add_option("--explain", rec_opts.explain,
                        "Write per-attribute score shares of the recommendations here");

  WhatIfOptions what_opts;
  auto* whatif = app.add_subcommand("whatif", "Rankings with one attribute reweighted by xi");
  whatif->add_option("--attr", what_opts.attribute, "Attribute name")->required();
  whatif->add_option("--xi", what_opts.xis, "Attribute multipliers")->delimiter(',');
  whatif->add_option("--user", what_opts.users, "User token (repeatable)");
  whatif->add_option("--cohort-value", what_opts.cohort_value,
                     "Report level fractions for users concentrated on this value");
  whatif->add_option("--cohort-size", what_opts.cohort_size)->check(CLI::PositiveNumber);
  whatif->add_option("-n", what_opts.n)->check(CLI::PositiveNumber);

  AblateOptions ablate_opts;
  auto* ablate = app.add_subcommand("ablate", "Train ablation variants");
  ablate->add_option("--variant", ablate_opts.variants,
                     "full, w/o_disentangling, w/o_intra, w/o_inter, w/o_high, w/o_low "
                     "(repeatable; default all)");
  ablate->add_option("-n", ablate_opts.n)->check(CLI::PositiveNumber);

  auto* grid = app.add_subcommand("grid", "Grid search over the --grid-* values");

  std::string what = "chunks-by-source";
  auto* export_cmd = app.add_subcommand("export", "Write chunk vectors as CSV to --out");
  export_cmd->add_option("--what", what)
      ->check(CLI::IsMember({"chunks-by-source", "fused-by-attribute"}));

  GradCheckOptions gc_opts;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check on a toy model");
  gradcheck->add_option("--eps", gc_opts.eps);
  gradcheck->add_option("--tolerance", gc_opts.tolerance);

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!config.no_banner) out << Banner() << '\n';
    if (app.got_subcommand(gen)) {
      GenSynthetic(config, spec, out);
    } else if (app.got_subcommand(train_cmd)) {
      config.train.Validate();
      TrainCommand(config, out);
    } else if (app.got_subcommand(evaluate)) {
      Evaluate(config, eval_opts, out);
    } else if (app.got_subcommand(recommend)) {
      Recommend(config, rec_opts, out);
    } else if (app.got_subcommand(whatif)) {
      WhatIf(config, what_opts, out);
    } else if (app.got_subcommand(ablate)) {
      config.train.Validate();
      Ablate(config, ablate_opts, out);
    } else if (app.got_subcommand(grid)) {
      config.train.Validate();
      Grid(config, out);
    } else if (app.got_subcommand(export_cmd)) {
      Export(config, what, out);
    } else if (app.got_subcommand(gradcheck)) {
      return GradCheckCommand(config, gc_opts, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ShapeError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace addrl::cli
