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

#include "addrl/train/checkpoint.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "addrl/error.h"

namespace addrl::train {

using nlohmann::json;

bool operator==(const HistoryRow& a, const HistoryRow& b) {
  auto same_loss = [](const std::optional<model::LossReport>& x,
                      const std::optional<model::LossReport>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->total == y->total && x->bpr == y->bpr && x->intra == y->intra &&
           x->inter == y->inter && x->low == y->low;
  };
  return a.epoch == b.epoch && same_loss(a.loss, b.loss) &&
         a.val_recall == b.val_recall && a.val_ndcg == b.val_ndcg;
}

namespace {

json ModelConfigJson(const model::ModelConfig& c) {
  return json{{"num_attributes", c.num_attributes},
              {"attribute_sizes", c.attribute_sizes},
              {"chunk_dim", c.chunk_dim},
              {"residual_chunk", c.residual_chunk},
              {"d0_textual", c.d0_textual},
              {"d0_visual", c.d0_visual},
              {"temperature", c.temperature},
              {"activation", std::string(model::ActivationName(c.activation))},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"gamma", c.gamma},
              {"l2", c.l2},
              {"weight_decay", c.weight_decay},
              {"normalize_contrastive", c.normalize_contrastive},
              {"inter_include_residual", c.inter_include_residual}};
}

model::ModelConfig ModelConfigFrom(const json& j) {
  model::ModelConfig c;
  j.at("num_attributes").get_to(c.num_attributes);
  j.at("attribute_sizes").get_to(c.attribute_sizes);
  j.at("chunk_dim").get_to(c.chunk_dim);
  j.at("residual_chunk").get_to(c.residual_chunk);
  j.at("d0_textual").get_to(c.d0_textual);
  j.at("d0_visual").get_to(c.d0_visual);
  j.at("temperature").get_to(c.temperature);
  c.activation = model::ParseActivation(j.at("activation").get<std::string>());
  j.at("alpha").get_to(c.alpha);
  j.at("beta").get_to(c.beta);
  j.at("gamma").get_to(c.gamma);
  j.at("l2").get_to(c.l2);
  j.at("weight_decay").get_to(c.weight_decay);
  j.at("normalize_contrastive").get_to(c.normalize_contrastive);
  j.at("inter_include_residual").get_to(c.inter_include_residual);
  return c;
}

json TrainConfigJson(const TrainConfig& c) {
  const AblationFlags& a = c.ablation;
  return json{{"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size},
              {"num_negatives", c.num_negatives},
              {"max_epochs", c.max_epochs},
              {"eval_every", c.eval_every},
              {"patience", c.patience},
              {"seed", c.seed},
              {"eval_n", c.eval_n},
              {"prune_zero_weight_terms", c.prune_zero_weight_terms},
              {"ablation",
               {{"disable_intra", a.disable_intra},
                {"disable_inter", a.disable_inter},
                {"disable_high", a.disable_high},
                {"disable_low", a.disable_low},
                {"disable_all_disentangling", a.disable_all_disentangling}}}};
}

TrainConfig TrainConfigFrom(const json& j) {
  TrainConfig c;
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("batch_size").get_to(c.batch_size);
  j.at("num_negatives").get_to(c.num_negatives);
  j.at("max_epochs").get_to(c.max_epochs);
  j.at("eval_every").get_to(c.eval_every);
  j.at("patience").get_to(c.patience);
  j.at("seed").get_to(c.seed);
  j.at("eval_n").get_to(c.eval_n);
  j.at("prune_zero_weight_terms").get_to(c.prune_zero_weight_terms);
  const json& a = j.at("ablation");
  a.at("disable_intra").get_to(c.ablation.disable_intra);
  a.at("disable_inter").get_to(c.ablation.disable_inter);
  a.at("disable_high").get_to(c.ablation.disable_high);
  a.at("disable_low").get_to(c.ablation.disable_low);
  a.at("disable_all_disentangling").get_to(c.ablation.disable_all_disentangling);
  return c;
}

json OptionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> OptionalFrom(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json HistoryJson(const HistoryRow& row) {
  json j{{"epoch", row.epoch},
         {"val_recall", OptionalJson(row.val_recall)},
         {"val_ndcg", OptionalJson(row.val_ndcg)}};
  if (row.loss) {
    j["loss"] = {row.loss->total, row.loss->bpr, row.loss->intra, row.loss->inter,
                 row.loss->low};
  } else {
    j["loss"] = nullptr;
  }
  return j;
}

HistoryRow HistoryFrom(const json& j) {
  HistoryRow row;
  j.at("epoch").get_to(row.epoch);
  row.val_recall = OptionalFrom(j.at("val_recall"));
  row.val_ndcg = OptionalFrom(j.at("val_ndcg"));
  const json& loss = j.at("loss");
  if (!loss.is_null()) {
    const auto v = loss.get<std::vector<double>>();
    if (v.size() != 5) throw DataError("history loss entry needs 5 values");
    row.loss = model::LossReport{v[0], v[1], v[2], v[3], v[4]};
  }
  return row;
}

}  // namespace

void WriteCheckpoint(const Checkpoint& ck, std::ostream& out) {
  json tensors = json::array();
  for (const auto& [name, tensor] : ck.params.entries()) {
    tensors.push_back(
        {{"name", name}, {"shape", tensor.shape()}, {"data", tensor.values()}});
  }
  json history = json::array();
  for (const HistoryRow& row : ck.history) history.push_back(HistoryJson(row));
  const json doc{
      {"model_config", ModelConfigJson(ck.model_config)},
      {"train_config", TrainConfigJson(ck.train_config)},
      {"epoch", ck.epoch},
      {"history", history},
      {"rng",
       {{"seed", ck.rng.seed}, {"epoch", ck.rng.epoch}, {"sample_step", ck.rng.sample_step}}},
      {"data",
       {{"num_users", ck.data.num_users},
        {"num_items", ck.data.num_items},
        {"split_seed", ck.data.split_seed},
        {"kcore", ck.data.kcore}}},
      {"tensors", tensors}};
  out << kCheckpointTag << '\n' << doc.dump() << '\n';
}

Checkpoint ReadCheckpoint(std::istream& in, std::string_view source) {
  std::string tag;
  std::getline(in, tag);
  if (!tag.empty() && tag.back() == '\r') tag.pop_back();
  if (tag != kCheckpointTag) {
    throw DataError(fmt::format("{}: not a checkpoint (expected first line '{}', got '{}')",
                                source, kCheckpointTag, tag.substr(0, 40)));
  }
  Checkpoint ck;
  try {
    const json doc = json::parse(in);
    ck.model_config = ModelConfigFrom(doc.at("model_config"));
    ck.train_config = TrainConfigFrom(doc.at("train_config"));
    doc.at("epoch").get_to(ck.epoch);
    for (const json& row : doc.at("history")) ck.history.push_back(HistoryFrom(row));
    const json& rng = doc.at("rng");
    rng.at("seed").get_to(ck.rng.seed);
    rng.at("epoch").get_to(ck.rng.epoch);
    rng.at("sample_step").get_to(ck.rng.sample_step);
    const json& data = doc.at("data");
    data.at("num_users").get_to(ck.data.num_users);
    data.at("num_items").get_to(ck.data.num_items);
    data.at("split_seed").get_to(ck.data.split_seed);
    data.at("kcore").get_to(ck.data.kcore);
    for (const json& t : doc.at("tensors")) {
      ck.params.Add(t.at("name").get<std::string>(),
                    diff::Tensor(t.at("shape").get<diff::Shape>(),
                                 t.at("data").get<std::vector<double>>()));
    }
  } catch (const json::exception& e) {
    throw DataError(fmt::format("{}: malformed checkpoint: {}", source, e.what()));
  } catch (const ShapeError& e) {
    throw DataError(fmt::format("{}: malformed tensor: {}", source, e.what()));
  }
  try {
    ck.model_config.Validate();
    ck.params.ValidateAgainst(ck.model_config);
  } catch (const ConfigError& e) {
    throw DataError(fmt::format("{}: inconsistent checkpoint: {}", source, e.what()));
  }
  return ck;
}

void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
  WriteCheckpoint(checkpoint, out);
  if (!out) throw DataError(fmt::format("{}: write failed", path.string()));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("{}: cannot open checkpoint", path.string()));
  return ReadCheckpoint(in, path.string());
}

void WriteHistoryCsv(std::span<const HistoryRow> history, std::ostream& out) {
  auto cell = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.17g}", *v) : std::string();
  };
  out << kHistoryHeader << '\n';
  for (const HistoryRow& row : history) {
    out << row.epoch;
    if (row.loss) {
      out << fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", row.loss->total,
                         row.loss->bpr, row.loss->intra, row.loss->inter, row.loss->low);
    } else {
      out << ",,,,,";
    }
    out << ',' << cell(row.val_recall) << ',' << cell(row.val_ndcg) << '\n';
  }
}

void SaveHistoryCsv(std::span<const HistoryRow> history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
  WriteHistoryCsv(history, out);
}

}  // namespace addrl::train
