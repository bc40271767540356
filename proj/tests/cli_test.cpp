// Copyright 2026 The vecforecast Authors.
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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "vf/dataset_io.hpp"
#include "vf/scene.hpp"

namespace vf::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "vecforecast");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vf_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::vector<std::string> tiny_model_flags() {
    return {"--subgraph-layers", "1", "--hidden-dim", "8", "--head-hidden-dim", "8",
            "--m",               "12", "--candidate-spacing", "2"};
  }

  // synth -> train -> eval -> predict inside `root`.
  void pipeline(const std::string& root, const std::string& extra_config = "") {
    ASSERT_EQ(call({"synth", "--out", root + "/data", "--n-train", "12", "--n-val", "4", "--seed",
                    "3"})
                  .code,
              0);
    std::vector<std::string> train = {"train", "--data", root + "/data/train", "--checkpoint",
                                      root + "/model.ckpt", "--loss-log", root + "/loss.csv",
                                      "--epochs", "2", "--batch-size", "4", "--seed", "9"};
    for (const auto& f : tiny_model_flags()) train.push_back(f);
    if (!extra_config.empty()) train.insert(train.begin(), {"--config", extra_config});
    const Result r = call(train);
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(call({"eval", "--checkpoint", root + "/model.ckpt", "--data", root + "/data/val",
                    "--out", root + "/metrics.json"})
                  .code,
              0);
    ASSERT_EQ(call({"predict", "--checkpoint", root + "/model.ckpt", "--data", root + "/data/val",
                    "--out", root + "/preds.csv"})
                  .code,
              0);
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpListsEveryFlagWithDefault) {
  for (const char* cmd : {"synth", "train", "eval", "predict", "gradcheck"}) {
    const Result r = call({cmd, "--help"});
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    int flags = 0;
    while (std::getline(lines, line)) {
      if (!line.starts_with("  --")) continue;
      ++flags;
      EXPECT_NE(line.find('['), std::string::npos) << cmd << ": " << line;
    }
    EXPECT_GT(flags, 0) << cmd;
  }
  const Result train = call({"train", "--help"});
  EXPECT_NE(train.out.find("--lr FLOAT [0.001]"), std::string::npos);
  EXPECT_NE(train.out.find("--loss TEXT:{tnt,wta} [tnt]"), std::string::npos);
}

TEST_F(CliTest, EvalWithoutCheckpointNamesTheField) {
  const Result r = call({"eval", "--data", path("nowhere")});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("ConfigInvalid"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("checkpoint"), std::string::npos) << r.err;
  EXPECT_EQ(r.err.find("ConfigInvalid: ConfigInvalid"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownSubcommand) {
  const Result r = call({"fly"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("UnknownSubcommand"), std::string::npos);
  EXPECT_EQ(call({}).code, kExitInvalid);
}

TEST_F(CliTest, InvalidValuesAreValidationErrors) {
  const Result lr = call({"train", "--data", path("d"), "--checkpoint", path("c"), "--lr", "0"});
  EXPECT_EQ(lr.code, kExitInvalid);
  EXPECT_NE(lr.err.find("learning_rate"), std::string::npos) << lr.err;
  EXPECT_EQ(call({"synth", "--out", path("s"), "--radius", "-1", "--topology", "curve"}).code,
            kExitInvalid);
  EXPECT_EQ(call({"train", "--optimizer", "rmsprop"}).code, kExitInvalid);
  EXPECT_EQ(call({"train", "--data", path("d"), "--checkpoint", path("c"), "--k", "0"}).code,
            kExitInvalid);
}

TEST_F(CliTest, MissingFilesAreRuntimeFailures) {
  const Result r = call({"eval", "--checkpoint", path("missing.ckpt"), "--data", path("missing")});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("FileError"), std::string::npos) << r.err;
}

TEST_F(CliTest, GradcheckPasses) {
  const Result r = call({"gradcheck", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("gradcheck passed"), std::string::npos);
}

TEST_F(CliTest, SmokePipeline) {
  pipeline(dir_.string());
  const auto report = nlohmann::json::parse(read_text_file(path("metrics.json")));
  EXPECT_EQ(report["k"], 6);
  EXPECT_EQ(report["n"], 4);
  for (const char* key : {"min_ade", "min_fde", "mr", "dac"}) EXPECT_TRUE(report.contains(key));

  const std::string log = read_text_file(path("loss.csv"));
  EXPECT_TRUE(log.starts_with("epoch,target_loss,motion_loss,score_loss\n"));
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 3);

  const std::string preds = read_text_file(path("preds.csv"));
  EXPECT_TRUE(preds.starts_with(prediction_csv_header()));
  // 4 scenes x 6 modes x 30 points.
  EXPECT_EQ(std::count(preds.begin(), preds.end(), '\n'), 1 + 4 * 6 * 30);
}

TEST_F(CliTest, IdenticalRunsGiveIdenticalFiles) {
  const std::string a = path("a"), b = path("b");
  pipeline(a);
  pipeline(b);
  for (const char* f : {"model.ckpt", "loss.csv", "metrics.json", "preds.csv",
                        "data/train/train_0003.csv", "data/val/val_0001.map.json"}) {
    EXPECT_EQ(read_text_file(a + "/" + f), read_text_file(b + "/" + f)) << f;
  }
}

TEST_F(CliTest, ResumeContinuesTheSameRun) {
  ASSERT_EQ(call({"synth", "--out", path("data"), "--n-train", "8", "--n-val", "2"}).code, 0);
  auto train = [&](const std::string& ckpt, const std::string& epochs, bool resume) {
    std::vector<std::string> args = {"train", "--data", path("data/train"), "--checkpoint",
                                     path(ckpt), "--epochs", epochs, "--batch-size", "4"};
    for (const auto& f : tiny_model_flags()) args.push_back(f);
    if (resume) args.insert(args.end(), {"--resume", path(ckpt)});
    return call(args).code;
  };
  ASSERT_EQ(train("full.ckpt", "3", false), 0);
  ASSERT_EQ(train("part.ckpt", "1", false), 0);
  ASSERT_EQ(train("part.ckpt", "3", true), 0);
  EXPECT_EQ(read_text_file(path("full.ckpt")), read_text_file(path("part.ckpt")));
}

TEST_F(CliTest, ConfigFileWithFlagPrecedence) {
  write_text_file(path("run.toml"),
                  "[synth]\nn-train = 3\nn-val = 2\nseed = 5\n");
  const Result r = call({"--config", path("run.toml"), "synth", "--out", path("d"), "--n-val", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_dataset(path("d/train")).size(), 3u);  // from the file
  EXPECT_EQ(read_dataset(path("d/val")).size(), 1u);    // flag wins

  // Same data as an explicit --seed 5 run.
  ASSERT_EQ(call({"synth", "--out", path("e"), "--n-train", "3", "--n-val", "1", "--seed", "5"}).code, 0);
  EXPECT_EQ(read_text_file(path("d/train/train_0001.csv")),
            read_text_file(path("e/train/train_0001.csv")));
}

}  // namespace
}  // namespace vf::cli
