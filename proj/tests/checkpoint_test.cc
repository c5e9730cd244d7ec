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

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "addrl/error.h"
#include "addrl/model/toy.h"
#include "test_util.h"

namespace addrl::train {
namespace {

Checkpoint MakeCheckpoint() {
  model::ToyProblem toy = model::MakeToyProblem(4);
  Checkpoint ck;
  ck.model_config = toy.config;
  ck.model_config.temperature = 0.1 + 1e-17;
  ck.model_config.activation = model::Activation::kRelu;
  ck.train_config.seed = 0xfeedfacecafebeefULL;
  ck.train_config.ablation.disable_low = true;
  ck.train_config.checkpoint_dir = "some/dir";
  ck.params = toy.params;
  ck.params.Get(model::param::kUserEmbedding)[0] = 1.0 / 3.0;
  ck.params.Get(model::param::kUserEmbedding)[1] = -5e-324;
  ck.epoch = 7;
  ck.history.push_back(HistoryRow{0, std::nullopt, 0.125, 0.0625});
  ck.history.push_back(HistoryRow{1, model::LossReport{1.5, 1, 0.25, 0.125, 0.1}, {}, {}});
  ck.history.push_back(
      HistoryRow{2, model::LossReport{std::nextafter(1.0, 2.0), 0, 0, 0, 0}, 0.2, 0.3});
  ck.rng = RngState{ck.train_config.seed, 7, 12345};
  ck.data = DataInfo{4, 6, 99, 5};
  return ck;
}

void ExpectEqual(const Checkpoint& a, const Checkpoint& b) {
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.epoch, b.epoch);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.rng, b.rng);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.model_config.temperature, b.model_config.temperature);
  EXPECT_EQ(a.model_config.attribute_sizes, b.model_config.attribute_sizes);
  EXPECT_EQ(a.model_config.activation, b.model_config.activation);
  EXPECT_EQ(a.model_config.residual_chunk, b.model_config.residual_chunk);
  EXPECT_EQ(a.model_config.alpha, b.model_config.alpha);
  EXPECT_EQ(a.train_config.seed, b.train_config.seed);
  EXPECT_EQ(a.train_config.ablation.disable_low, b.train_config.ablation.disable_low);
  EXPECT_TRUE(b.train_config.checkpoint_dir.empty());  // output location is run-local
  EXPECT_EQ(a.train_config.learning_rate, b.train_config.learning_rate);
}

TEST(CheckpointTest, StreamRoundTripIsBitwise) {
  const Checkpoint ck = MakeCheckpoint();
  std::stringstream buf;
  WriteCheckpoint(ck, buf);
  const Checkpoint back = ReadCheckpoint(buf);
  ExpectEqual(ck, back);
  std::stringstream again;
  WriteCheckpoint(back, again);
  std::stringstream first;
  WriteCheckpoint(ck, first);
  EXPECT_EQ(first.str(), again.str());
}

TEST(CheckpointTest, FileRoundTrip) {
  const Checkpoint ck = MakeCheckpoint();
  const auto path = testing::TempDir("ckpt_rt") / "m.ckpt";
  SaveCheckpoint(ck, path);
  ExpectEqual(ck, LoadCheckpoint(path));
}

TEST(CheckpointTest, RejectsBadInput) {
  std::stringstream bad_tag("NOT-A-CKPT\n{}");
  EXPECT_THROW(ReadCheckpoint(bad_tag), DataError);
  std::stringstream truncated(std::string(kCheckpointTag) + "\n{\"epoch\": ");
  EXPECT_THROW(ReadCheckpoint(truncated), DataError);
  std::stringstream empty_json(std::string(kCheckpointTag) + "\n{}");
  EXPECT_THROW(ReadCheckpoint(empty_json), DataError);
  EXPECT_THROW(LoadCheckpoint("/nonexistent/addrl.ckpt"), DataError);

  // Parameters that disagree with the stored config.
  Checkpoint ck = MakeCheckpoint();
  ck.model_config.chunk_dim = 5;
  std::stringstream buf;
  WriteCheckpoint(ck, buf);
  EXPECT_THROW(ReadCheckpoint(buf), DataError);
}

TEST(HistoryCsvTest, Format) {
  const Checkpoint ck = MakeCheckpoint();
  std::ostringstream out;
  WriteHistoryCsv(ck.history, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kHistoryHeader);
  std::getline(in, line);
  EXPECT_EQ(line, "0,,,,,,0.125,0.0625");
  std::getline(in, line);
  EXPECT_EQ(line, "1,1.5,1,0.25,0.125,0.10000000000000001,,");
  std::getline(in, line);
  EXPECT_EQ(line, "2,1.0000000000000002,0,0,0,0,0.20000000000000001,0.29999999999999999");
  EXPECT_FALSE(std::getline(in, line));
}

}  // namespace
}  // namespace addrl::train
