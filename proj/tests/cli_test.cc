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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace addrl::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "--no-banner");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

const std::vector<std::string> kTrainFlags = {
    "--chunk-dim", "3",  "--batch-size", "32", "--learning-rate", "0.01", "--max-epochs", "3",
    "--eval-every", "1", "--patience",   "5",  "--num-negatives", "2",    "--seed",       "4"};

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(testing::TempDir("cli"));
    const CliResult gen = Cli({"gen-synthetic", "--users", "20", "--items", "30", "--per-user", "6",
                         "--d0-textual", "6", "--d0-visual", "5", "--attribute-sizes", "3,2",
                         "--seed", "2", "--out", Data()});
    ASSERT_EQ(gen.code, 0) << gen.err;
    ASSERT_EQ(Train("run").code, 0);
  }
  static void TearDownTestSuite() { delete root_; }
  static std::string Data() { return (*root_ / "data").string(); }
  static std::string Ckpt() { return (*root_ / "run" / "model.ckpt").string(); }
  static fs::path Path(const std::string& name) { return *root_ / name; }
  static CliResult Train(const std::string& out) {
    std::vector<std::string> args = {"train", "--data", Data(), "--out", Path(out).string()};
    args.insert(args.end(), kTrainFlags.begin(), kTrainFlags.end());
    return Cli(args);
  }
  static fs::path* root_;
};

fs::path* CliTest::root_ = nullptr;

TEST_F(CliTest, GenSyntheticWritesDataset) {
  for (const char* f : {"interactions.tsv", "features_textual.txt", "features_visual.txt",
                        "attributes.tsv", "user_map.tsv", "item_map.tsv", "preferences.tsv"}) {
    EXPECT_TRUE(fs::exists(fs::path(Data()) / f)) << f;
  }
  EXPECT_EQ(Lines(Slurp(fs::path(Data()) / "interactions.tsv")).size(), 120u);
}

TEST_F(CliTest, TrainOutputs) {
  for (const char* f : {"model.ckpt", "history.csv", "metrics.csv"})
    EXPECT_TRUE(fs::exists(Path("run") / f)) << f;
  EXPECT_TRUE(fs::exists(Path("run") / "checkpoints" / "best.ckpt"));
  const auto history = Lines(Slurp(Path("run") / "history.csv"));
  ASSERT_EQ(history.size(), 5u);
  EXPECT_EQ(history[0],
            "epoch,loss_total,loss_bpr,loss_intra,loss_inter,loss_low,val_recall20,val_ndcg20");
  const std::string metrics = Slurp(Path("run") / "metrics.csv");
  EXPECT_NE(metrics.find("recall,20,"), std::string::npos);
  EXPECT_NE(metrics.find("popularity_recall,20,"), std::string::npos);
}

TEST_F(CliTest, TrainingIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(Train("run_again").code, 0);
  for (const char* f : {"history.csv", "metrics.csv", "model.ckpt"})
    EXPECT_EQ(Slurp(Path("run") / f), Slurp(Path("run_again") / f)) << f;
}

TEST_F(CliTest, EvaluateReproducesValidationRecall) {
  const CliResult r = Cli({"evaluate", "--data", Data(), "--checkpoint", Ckpt(), "--out",
                     Path("eval").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string metrics = Slurp(Path("eval") / "metrics.csv");
  EXPECT_NE(metrics.find("val_recall,20,"), std::string::npos);
  EXPECT_TRUE(fs::exists(Path("eval") / "probes.csv"));
  EXPECT_NE(r.out.find("chunk probe"), std::string::npos);
}

TEST_F(CliTest, WhatIfAtOneMatchesRecommend) {
  const CliResult rec = Cli({"recommend", "--data", Data(), "--checkpoint", Ckpt(), "--user", "u3",
                       "--user", "u7", "-n", "5", "--out", Path("rec.csv").string(),
                       "--explain", Path("explain.csv").string()});
  ASSERT_EQ(rec.code, 0) << rec.err;
  const CliResult what = Cli({"whatif", "--data", Data(), "--checkpoint", Ckpt(), "--attr", "attr0",
                        "--xi", "1", "--user", "u3", "--user", "u7", "-n", "5", "--out",
                        Path("what.csv").string()});
  ASSERT_EQ(what.code, 0) << what.err;
  EXPECT_EQ(rec.out, what.out);
  const auto a = Lines(Slurp(Path("rec.csv")));
  const auto b = Lines(Slurp(Path("what.csv")));
  ASSERT_EQ(a.size(), 11u);
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_EQ("1," + a[i], b[i]);
  const auto explain = Lines(Slurp(Path("explain.csv")));
  EXPECT_EQ(explain.size(), 1u + 2 * 5 * 3);
}

TEST_F(CliTest, WhatIfCohort) {
  const CliResult r = Cli({"whatif", "--data", Data(), "--checkpoint", Ckpt(), "--attr", "attr1",
                     "--cohort-value", "v0", "--cohort-size", "5", "--xi=-1,0,1,2", "--out",
                     Path("ctl.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Lines(Slurp(Path("ctl.csv"))).size(), 1u + 4 * 2);
}

TEST_F(CliTest, ExportKinds) {
  ASSERT_EQ(Cli({"export", "--data", Data(), "--checkpoint", Ckpt(), "--what",
                 "fused-by-attribute", "--out", Path("fused.csv").string()})
                .code,
            0);
  const auto items = Lines(Slurp(fs::path(Data()) / "item_map.tsv")).size();
  EXPECT_EQ(Lines(Slurp(Path("fused.csv"))).size(), 1u + items * 2);
  EXPECT_EQ(Cli({"export", "--data", Data(), "--checkpoint", Ckpt(), "--what", "bogus", "--out",
                 Path("x.csv").string()})
                .code,
            kExitConfig);
}

TEST_F(CliTest, AblateAndGrid) {
  std::vector<std::string> args = {"ablate", "--data", Data(), "--out", Path("abl").string(),
                                   "--variant", "full", "--variant", "w/o_low"};
  args.insert(args.end(), kTrainFlags.begin(), kTrainFlags.end());
  const CliResult a = Cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(Lines(Slurp(Path("abl") / "ablation.csv")).size(), 3u);
  EXPECT_TRUE(fs::exists(Path("abl") / "history_wo_low.csv"));

  args = {"grid", "--data", Data(), "--out", Path("grid").string(), "--grid-alpha", "0,1",
          "--jobs", "2"};
  args.insert(args.end(), kTrainFlags.begin(), kTrainFlags.end());
  const CliResult g = Cli(args);
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(Lines(Slurp(Path("grid") / "grid.csv")).size(), 3u);
}

TEST_F(CliTest, ErrorExitCodes) {
  EXPECT_EQ(Cli({"recommend", "--data", Data(), "--checkpoint", Ckpt(), "--user", "nobody"}).code,
            kExitData);
  EXPECT_EQ(Cli({"train", "--data", Path("missing").string(), "--out", Path("m").string()}).code,
            kExitData);
  EXPECT_EQ(Cli({"evaluate", "--data", Data(), "--checkpoint", Path("none.ckpt").string()}).code,
            kExitData);
  EXPECT_EQ(Cli({"train", "--data", Data(), "--out", Path("bad").string(), "--patience", "1"})
                .code,
            kExitConfig);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(Cli({}).code, kExitConfig);
  EXPECT_EQ(Cli({"train", "--alpha", "abc"}).code, kExitConfig);
  EXPECT_EQ(Cli({"whatif", "--data", Data(), "--checkpoint", Ckpt(), "--attr", "nope",
                 "--user", "u1"})
                .code,
            kExitConfig);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const fs::path cfg = Path("run.toml");
  std::ofstream(cfg) << "max-epochs = 1\nchunk-dim = 3\nbatch-size = 64\nlearning-rate = 0.01\n"
                        "eval-every = 1\npatience = 1\n";
  const CliResult a = Cli({"--config", cfg.string(), "train", "--data", Data(), "--out",
                     Path("cfg1").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(Lines(Slurp(Path("cfg1") / "history.csv")).size(), 3u);
  const CliResult b = Cli({"--config", cfg.string(), "train", "--data", Data(), "--out",
                     Path("cfg2").string(), "--max-epochs", "2", "--patience", "2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Lines(Slurp(Path("cfg2") / "history.csv")).size(), 4u);
  std::ofstream(cfg) << "no-such-key = 3\n";
  EXPECT_EQ(Cli({"--config", cfg.string(), "gradcheck"}).code, kExitConfig);
}

TEST(CliStandaloneTest, GradCheckPasses) {
  const CliResult r = Cli({"gradcheck"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  for (const char* name : {"bpr", "intra", "inter", "low", "total"})
    EXPECT_NE(r.out.find(name), std::string::npos);
  EXPECT_EQ(Cli({"gradcheck", "--tolerance", "1e-30"}).code, kExitNumerical);
}

TEST(CliStandaloneTest, HelpListsKeys) {
  const CliResult r = Cli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  const std::string text = r.out + r.err;
  for (const char* key : {"--alpha", "--temperature", "--chunk-dim", "--learning-rate",
                          "--grid-l2", "--config", "gen-synthetic", "whatif"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(CliStandaloneTest, BannerGoesToStdout) {
  std::ostringstream out, err;
  ASSERT_EQ(RunCli({"gradcheck"}, out, err), 0);
  EXPECT_EQ(out.str().rfind("# addrl ", 0), 0u);
}

}  // namespace
}  // namespace addrl::cli
