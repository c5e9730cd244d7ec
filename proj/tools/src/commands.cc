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

#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

#include <fmt/format.h>

#include "addrl/data/dataset.h"
#include "addrl/data/split.h"
#include "addrl/error.h"
#include "addrl/eval/probes.h"
#include "addrl/eval/reports.h"
#include "addrl/eval/scorer.h"
#include "addrl/model/addrl_model.h"
#include "addrl/model/toy.h"
#include "addrl/train/checkpoint.h"
#include "addrl/train/trainer.h"

namespace addrl::cli {
namespace fs = std::filesystem;
namespace {

const std::string& Require(const std::string& value, std::string_view flag) {
  if (value.empty()) throw ConfigError(fmt::format("{} is required", flag));
  return value;
}

fs::path OutDir(const RunConfig& config) {
  fs::path dir = Require(config.out, "--out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  return dir;
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
  return out;
}

struct MetricRow {
  std::string metric;
  int n;
  double value;
  int users_counted;
};

void WriteMetricsCsv(const std::vector<MetricRow>& rows, const fs::path& path) {
  std::ofstream out = OpenOut(path);
  out << "metric,n,value,users_counted\n";
  for (const MetricRow& r : rows) {
    out << fmt::format("{},{},{:.17g},{}\n", r.metric, r.n, r.value, r.users_counted);
  }
}

void AppendMetrics(std::vector<MetricRow>& rows, std::string_view prefix,
                   const std::vector<eval::MetricSummary>& summaries) {
  for (const auto& m : summaries)
    rows.push_back({fmt::format("{}recall", prefix), m.n, m.recall, m.users_counted});
  for (const auto& m : summaries)
    rows.push_back({fmt::format("{}ndcg", prefix), m.n, m.ndcg, m.users_counted});
}

std::string SplitSummary(const data::DatasetSplit& split) {
  std::size_t val = 0, test = 0;
  for (const auto& v : split.validation) val += v.size();
  for (const auto& t : split.test) test += t.size();
  return fmt::format("{} users, {} items; {} train / {} validation / {} test interactions",
                     split.num_users(), split.num_items, split.NumTrain(), val, test);
}

// Dataset, split and checkpoint for the commands that read a trained model.
struct Trained {
  data::Dataset dataset;
  data::DatasetSplit split;
  train::Checkpoint checkpoint;
  std::unique_ptr<model::AddrlModel> model;
  std::unique_ptr<eval::Scorer> scorer;
};

std::unique_ptr<Trained> LoadTrained(const RunConfig& config) {
  auto t = std::make_unique<Trained>();
  t->checkpoint = train::LoadCheckpoint(Require(config.checkpoint, "--checkpoint"));
  const train::DataInfo& info = t->checkpoint.data;
  t->dataset = data::LoadDatasetDir(Require(config.data_dir, "--data"), info.kcore);
  if (t->dataset.num_users() != info.num_users || t->dataset.num_items() != info.num_items) {
    throw DataError(fmt::format(
        "{}: checkpoint expects {} users and {} items, dataset {} has {} and {}",
        config.checkpoint, info.num_users, info.num_items, config.data_dir,
        t->dataset.num_users(), t->dataset.num_items()));
  }
  t->split = data::SplitDataset(t->dataset.interactions, info.split_seed);
  try {
    t->model = std::make_unique<model::AddrlModel>(t->checkpoint.model_config, t->dataset);
  } catch (const ConfigError& e) {
    throw DataError(fmt::format("{} does not fit {}: {}", config.checkpoint,
                                config.data_dir, e.what()));
  }
  t->scorer = std::make_unique<eval::Scorer>(*t->model, t->checkpoint.params);
  return t;
}

int UserIndex(const data::Dataset& dataset, const std::string& token) {
  const int u = dataset.interactions.users.Find(token);
  if (u < 0) throw DataError(fmt::format("unknown user '{}'", token));
  return u;
}

std::string Sanitize(std::string_view variant) {
  std::string s;
  for (char c : variant) {
    if (c != '/') s.push_back(c);
  }
  return s;
}

}  // namespace

void GenSynthetic(const RunConfig& config, const data::SyntheticSpec& spec,
                  std::ostream& out) {
  const fs::path dir = OutDir(config);
  const data::SyntheticDataset syn = data::GenerateSynthetic(spec, config.train.seed);
  data::SaveDatasetDir(syn.dataset, dir);
  std::ofstream pref = OpenOut(dir / "preferences.tsv");
  const data::AttributeSchema& schema = syn.dataset.schema();
  for (std::size_t u = 0; u < syn.preferred_values.size(); ++u) {
    pref << 'u' << u << '\t';
    for (int k = 0; k < schema.num_attributes(); ++k) {
      const data::Attribute& a = schema.attributes[k];
      pref << (k ? ";" : "") << a.name << '=' << a.values[syn.preferred_values[u][k]];
    }
    pref << '\n';
  }
  out << fmt::format("wrote {}: {} users, {} items, {} interactions, {} attributes\n",
                     dir.string(), syn.dataset.num_users(), syn.dataset.num_items(),
                     syn.dataset.interactions.pairs.size(), schema.num_attributes());
}

void TrainCommand(const RunConfig& config, std::ostream& out) {
  const fs::path dir = OutDir(config);
  const data::Dataset dataset =
      data::LoadDatasetDir(Require(config.data_dir, "--data"), config.kcore);
  const model::ModelConfig mc = model::ConfigForDataset(config.model, dataset);
  const data::DatasetSplit split = data::SplitDataset(dataset.interactions, config.train.seed);
  out << SplitSummary(split) << '\n';
  train::TrainConfig tc = config.train;
  if (tc.checkpoint_dir.empty()) tc.checkpoint_dir = (dir / "checkpoints").string();

  train::DataInfo info;
  info.split_seed = config.train.seed;
  info.kcore = config.kcore;
  const train::TrainResult r = train::Train(
      dataset, split, mc, tc,
      [&](const train::HistoryRow& row) {
        if (!row.val_recall) return;
        out << fmt::format("epoch {:4d}  loss {:>12}  val_recall@{} {:.6f}  val_ndcg@{} {:.6f}\n",
                           row.epoch, row.loss ? fmt::format("{:.6f}", row.loss->total) : "-",
                           tc.eval_n, *row.val_recall, tc.eval_n, *row.val_ndcg);
      },
      info);
  train::SaveCheckpoint(r.best, dir / "model.ckpt");
  train::SaveHistoryCsv(r.history, dir / "history.csv");

  model::AddrlModel m(r.best.model_config, dataset);
  eval::Scorer scorer(m, r.best.params);
  const int ns[] = {10, 20, 50};
  std::vector<MetricRow> rows;
  const auto test = eval::EvaluateRanking(split, eval::EvalSplit::kTest, ns,
                                          eval::ModelScores(scorer));
  AppendMetrics(rows, "", test);
  AppendMetrics(rows, "popularity_",
                eval::EvaluateRanking(split, eval::EvalSplit::kTest, ns,
                                      eval::PopularityScores(split)));
  WriteMetricsCsv(rows, dir / "metrics.csv");
  out << fmt::format("best epoch {} of {}; test recall@20 {:.6f}, ndcg@20 {:.6f}\n",
                     r.best.epoch, r.epochs_run, test[1].recall, test[1].ndcg);
  out << fmt::format("wrote {}\n", (dir / "model.ckpt").string());
}

void Evaluate(const RunConfig& config, const EvaluateOptions& options, std::ostream& out) {
  const auto t = LoadTrained(config);
  std::vector<MetricRow> rows;
  const auto test = eval::EvaluateRanking(t->split, eval::EvalSplit::kTest, options.ns,
                                          eval::ModelScores(*t->scorer));
  AppendMetrics(rows, "", test);
  AppendMetrics(rows, "val_",
                eval::EvaluateRanking(t->split, eval::EvalSplit::kValidation, options.ns,
                                      eval::ModelScores(*t->scorer)));
  AppendMetrics(rows, "popularity_",
                eval::EvaluateRanking(t->split, eval::EvalSplit::kTest, options.ns,
                                      eval::PopularityScores(t->split)));
  for (const MetricRow& r : rows) {
    out << fmt::format("{:<18} @{:<3} {:.6f}  ({} users)\n", r.metric, r.n, r.value,
                       r.users_counted);
  }

  const eval::ProbeMode mode =
      options.refit_probes ? eval::ProbeMode::kRefit : eval::ProbeMode::kTrained;
  const model::ModelConfig& mc = t->model->config();
  std::string probes = "probe,source,class,accuracy\n";
  for (eval::ProbeSource s : eval::kProbeSources) {
    const auto acc = eval::ChunkProbe(*t->model, t->checkpoint.params, s, mode);
    const auto name = eval::ProbeSourceName(s);
    probes += fmt::format("chunk,{},all,{:.17g}\n", name, acc.overall);
    for (int k = 0; k < mc.num_chunks(); ++k) {
      probes += fmt::format("chunk,{},{},{:.17g}\n", name,
                            eval::ChunkName(t->dataset, mc, k), acc.per_class[k]);
    }
    out << fmt::format("chunk probe {:<8} {:.4f}\n", name, acc.overall);
  }
  const auto values = eval::ValueProbe(*t->model, t->checkpoint.params, mode);
  for (int k = 0; k < mc.num_attributes; ++k) {
    const std::string attr = eval::ChunkName(t->dataset, mc, k);
    probes += fmt::format("value,fused,{},{:.17g}\n", attr, values.per_class[k]);
    out << fmt::format("value probe {:<8} {:.4f}\n", attr, values.per_class[k]);
  }
  const auto retrieval = eval::CrossmodalRetrieval(*t->model, t->checkpoint.params);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      probes += fmt::format("crossmodal,{},{},{:.17g}\n", eval::kModalityNames[a],
                            eval::kModalityNames[b], retrieval[a][b]);
      out << fmt::format("crossmodal {}->{} {:.4f}\n", eval::kModalityNames[a],
                         eval::kModalityNames[b], retrieval[a][b]);
    }
  }
  if (!config.out.empty()) {
    const fs::path dir = OutDir(config);
    WriteMetricsCsv(rows, dir / "metrics.csv");
    OpenOut(dir / "probes.csv") << probes;
    out << fmt::format("wrote {}\n", dir.string());
  }
}

void Recommend(const RunConfig& config, const RecommendOptions& options, std::ostream& out) {
  if (options.users.empty()) throw ConfigError("--user is required");
  const auto t = LoadTrained(config);
  std::string csv = "user_token,rank,item_token,score\n";
  std::vector<eval::InterpretabilityRow> explain;
  for (const std::string& token : options.users) {
    const int u = UserIndex(t->dataset, token);
    const auto ranked = eval::RankItems(*t->scorer, t->split, u, options.n);
    std::vector<int> items;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      const std::string& item = t->dataset.interactions.items.token(ranked[r].item);
      out << fmt::format("{} {:3d} {} {:.6f}\n", token, r + 1, item, ranked[r].score);
      csv += fmt::format("{},{},{},{:.17g}\n", token, r + 1, item, ranked[r].score);
      items.push_back(ranked[r].item);
    }
    const int one[] = {u};
    const auto rows = eval::InterpretabilityReport(*t->scorer, one, items);
    explain.insert(explain.end(), rows.begin(), rows.end());
  }
  if (!config.out.empty()) OpenOut(config.out) << csv;
  if (!options.explain.empty()) {
    std::ofstream f = OpenOut(options.explain);
    eval::WriteInterpretabilityCsv(explain, t->dataset, t->model->config(), f);
  }
}

void WhatIf(const RunConfig& config, const WhatIfOptions& options, std::ostream& out) {
  const auto t = LoadTrained(config);
  const data::AttributeSchema& schema = t->dataset.schema();
  const int attribute = schema.Find(Require(options.attribute, "--attr"));
  if (attribute < 0) {
    throw ConfigError(fmt::format("--attr: unknown attribute '{}'", options.attribute));
  }
  if (options.xis.empty()) throw ConfigError("--xi needs at least one value");

  if (!options.cohort_value.empty()) {
    const data::Attribute& attr = schema.attributes[attribute];
    const int level = attr.FindValue(options.cohort_value);
    if (level < 0) {
      throw ConfigError(fmt::format("--cohort-value: attribute {} has no value '{}'",
                                    attr.name, options.cohort_value));
    }
    const std::vector<int> levels = t->dataset.labels().Column(attribute);
    const std::vector<int> cohort =
        eval::SelectCohort(t->split, levels, level, options.cohort_size);
    const auto table = eval::ControllabilityReport(*t->scorer, t->split, cohort, attribute,
                                                   levels, attr.values, options.xis,
                                                   options.n);
    out << fmt::format("cohort of {} users concentrated on {}={}\n", cohort.size(),
                       attr.name, options.cohort_value);
    for (std::size_t x = 0; x < table.xis.size(); ++x) {
      out << fmt::format("xi {:>5g}  {}={:.4f}\n", table.xis[x], options.cohort_value,
                         table.fractions[x][level]);
    }
    if (!config.out.empty()) {
      std::ofstream f = OpenOut(config.out);
      eval::WriteControllabilityCsv(table, f);
    }
    return;
  }

  if (options.users.empty()) throw ConfigError("whatif needs --user or --cohort-value");
  std::string csv = "xi,user_token,rank,item_token,score\n";
  std::vector<double> scores;
  for (double xi : options.xis) {
    for (const std::string& token : options.users) {
      const int u = UserIndex(t->dataset, token);
      t->scorer->ScoreAllControlled(u, attribute, xi, scores);
      const auto ranked = eval::TopN(scores, t->split.train[u], options.n);
      for (std::size_t r = 0; r < ranked.size(); ++r) {
        const std::string& item = t->dataset.interactions.items.token(ranked[r].item);
        if (options.xis.size() > 1) out << fmt::format("xi={:g} ", xi);
        out << fmt::format("{} {:3d} {} {:.6f}\n", token, r + 1, item, ranked[r].score);
        csv += fmt::format("{:g},{},{},{},{:.17g}\n", xi, token, r + 1, item, ranked[r].score);
      }
    }
  }
  if (!config.out.empty()) OpenOut(config.out) << csv;
}

void Ablate(const RunConfig& config, const AblateOptions& options, std::ostream& out) {
  const fs::path dir = OutDir(config);
  const data::Dataset dataset =
      data::LoadDatasetDir(Require(config.data_dir, "--data"), config.kcore);
  const model::ModelConfig mc = model::ConfigForDataset(config.model, dataset);
  const data::DatasetSplit split = data::SplitDataset(dataset.interactions, config.train.seed);
  std::vector<std::string> variants = options.variants;
  if (variants.empty()) {
    variants.assign(std::begin(train::kAblationVariants), std::end(train::kAblationVariants));
  }
  const auto rows = train::RunAblations(dataset, split, mc, config.train, variants,
                                        config.jobs, options.n);
  std::ofstream csv = OpenOut(dir / "ablation.csv");
  train::WriteAblationCsv(rows, csv);
  for (const train::AblationRow& r : rows) {
    train::SaveHistoryCsv(r.history, dir / fmt::format("history_{}.csv", Sanitize(r.variant)));
    out << fmt::format("{:<18} recall@{} {:.6f}  ndcg@{} {:.6f}  (best epoch {})\n", r.variant,
                       options.n, r.test.recall, options.n, r.test.ndcg, r.best_epoch);
  }
  out << fmt::format("wrote {}\n", (dir / "ablation.csv").string());
}

void Grid(const RunConfig& config, std::ostream& out) {
  const fs::path dir = OutDir(config);
  const data::Dataset dataset =
      data::LoadDatasetDir(Require(config.data_dir, "--data"), config.kcore);
  const model::ModelConfig mc = model::ConfigForDataset(config.model, dataset);
  const data::DatasetSplit split = data::SplitDataset(dataset.interactions, config.train.seed);
  out << fmt::format("{} grid points\n", config.grid.size());
  const train::GridResult result =
      train::GridSearch(dataset, split, mc, config.train, config.grid, config.jobs);
  std::ofstream csv = OpenOut(dir / "grid.csv");
  train::WriteGridCsv(result, csv);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const train::GridRow& r = result.rows[i];
    out << fmt::format("{} {}  val_recall {:.6f}  val_ndcg {:.6f}\n",
                       i == result.best ? '*' : ' ', r.point.Label(), r.validation.recall,
                       r.validation.ndcg);
  }
  out << fmt::format("best: {}\n", result.rows[result.best].point.Label());
}

void Export(const RunConfig& config, const std::string& what, std::ostream& out) {
  const eval::ExportKind kind = eval::ParseExportKind(what);
  const std::string& path = Require(config.out, "--out");
  const auto t = LoadTrained(config);
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  eval::ExportEmbeddings(*t->scorer, t->dataset, kind, p);
  out << fmt::format("wrote {}\n", path);
}

int GradCheckCommand(const RunConfig& config, const GradCheckOptions& options,
                     std::ostream& out) {
  const auto results = model::ToyGradCheck(config.train.seed, options.eps);
  double worst = 0.0;
  for (const auto& r : results) {
    worst = std::max(worst, r.result.max_rel_error);
    out << fmt::format("{:<6} max_rel_error {:.3e}  worst {}[{}]  ({} entries)\n", r.loss,
                       r.result.max_rel_error, r.result.worst_param, r.result.worst_index,
                       r.result.entries_checked);
  }
  const bool ok = worst < options.tolerance;
  out << fmt::format("max relative error {:.3e} {} {:g}: {}\n", worst, ok ? "<" : ">=",
                     options.tolerance, ok ? "ok" : "FAILED");
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace addrl::cli
