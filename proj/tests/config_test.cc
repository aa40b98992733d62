/*
 * Copyright 2026 The BDFL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bdfl/experiment/config.h"

#include <gtest/gtest.h>

#include <cstdlib>

#include "bdfl/error.h"
#include "test_util.h"

namespace bdfl::experiment {
namespace {

std::vector<int> Range(int lo, int hi) {
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

TEST(PresetTest, DatasetDefaults) {
  const RunConfig bc = Preset("breast_cancer");
  EXPECT_EQ(bc.dataset.party_a_columns, Range(10, 29));
  EXPECT_EQ(bc.dataset.path.filename(), "breast_cancer.csv");
  EXPECT_EQ(bc.training.rounds, 100);
  EXPECT_EQ(bc.training.schedule.decay, 0.05);
  const RunConfig cc = Preset("credit_card");
  EXPECT_EQ(cc.dataset.party_a_columns, Range(0, 11));
  EXPECT_EQ(cc.training.rounds, 50);
  EXPECT_EQ(cc.training.schedule.decay, 0.06);
  EXPECT_EQ(cc.training.optimizer.method, optim::OptimizerKind::Method::kBfgs);
  EXPECT_EQ(cc.training.key_bits, 1024);
  EXPECT_THROW(Preset("mnist"), ConfigError);
}

TEST(ParseConfigTest, ReadsEveryTable) {
  const RunConfig c = ParseConfig(R"(
mode = "oracle"
schedule = "threaded"
output_dir = "runs/x"

[dataset]
name = "csv"
path = "table.csv"
label_column = 0
has_header = false
label_mapping = { "M" = 1, "B" = -1 }
party_a_columns = [1, 2]
test_fraction = 0.25
standardize = false
max_rows = 40

[training]
optimizer = "bdfl"
alpha = 0.3
rounds = 7
lr0 = 0.2
decay = 0.01
tol = 1e-4
seed = 99
key_bits = 2048
scale_bits = 32
curvature_eps = 1e-9
batch_size = 16
deterministic = false

[network]
role = "guest_b"
host_a = "127.0.0.1:7000"
guest_b = "10.0.0.2:7001"
arbiter_c = "localhost:7002"
connect_timeout_ms = 500
)",
                                  "/base");
  EXPECT_EQ(c.mode, Mode::kOracle);
  EXPECT_EQ(c.schedule, federation::Schedule::kThreaded);
  EXPECT_EQ(c.output_dir, "/base/runs/x");
  EXPECT_EQ(c.dataset.path, "/base/table.csv");
  EXPECT_EQ(c.dataset.csv.label_column, 0);
  EXPECT_FALSE(c.dataset.csv.has_header);
  EXPECT_EQ(c.dataset.csv.label_mapping.at("M"), 1);
  EXPECT_EQ(c.dataset.party_a_columns, (std::vector<int>{1, 2}));
  EXPECT_EQ(c.dataset.test_fraction, 0.25);
  EXPECT_FALSE(c.dataset.standardize);
  EXPECT_EQ(c.dataset.max_rows, 40u);
  EXPECT_EQ(c.training.optimizer.method, optim::OptimizerKind::Method::kBdfl);
  EXPECT_EQ(c.training.optimizer.alpha, 0.3);
  EXPECT_EQ(c.training.rounds, 7);
  EXPECT_EQ(c.training.schedule.lr0, 0.2);
  EXPECT_EQ(c.training.schedule.decay, 0.01);
  EXPECT_EQ(c.training.tol, 1e-4);
  EXPECT_EQ(c.training.seed, 99u);
  EXPECT_EQ(c.training.key_bits, 2048);
  EXPECT_EQ(c.training.scale_bits, 32);
  EXPECT_EQ(c.training.curvature_eps, 1e-9);
  EXPECT_EQ(c.training.batch_size, 16u);
  EXPECT_FALSE(c.training.deterministic);
  EXPECT_EQ(c.network.role, federation::PartyRole::kGuestB);
  EXPECT_EQ(c.network.endpoints.at(federation::PartyRole::kGuestB).host,
            "10.0.0.2");
  EXPECT_EQ(c.network.endpoints.at(federation::PartyRole::kArbiterC).port,
            7002);
  EXPECT_EQ(c.network.connect_timeout_ms, 500);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ParseConfigTest, MissingKeysKeepPresetValues) {
  const RunConfig c = ParseConfig("[training]\noptimizer = \"dfp\"\n");
  EXPECT_EQ(c.dataset.name, "breast_cancer");
  EXPECT_EQ(c.training.rounds, 100);
  EXPECT_EQ(c.training.optimizer.method, optim::OptimizerKind::Method::kDfp);
  EXPECT_EQ(c.mode, Mode::kFederated);
}

TEST(ParseConfigTest, RejectsBadInput) {
  EXPECT_THROW(ParseConfig("mode = "), ConfigError);
  EXPECT_THROW(ParseConfig("mode = \"quantum\""), ConfigError);
  EXPECT_THROW(ParseConfig("[training]\noptimizer = \"adam\""), ConfigError);
  EXPECT_THROW(ParseConfig("[training]\nrounds = \"ten\""), ConfigError);
  EXPECT_THROW(ParseConfig("[dataset]\nname = \"imagenet\""), ConfigError);
  EXPECT_THROW(ParseConfig("[dataset]\nparty_a_columns = 3"), ConfigError);
  EXPECT_THROW(ParseConfig("schedule = \"random\""), ConfigError);
  EXPECT_THROW(ParseConfig("[network]\nhost_a = \"nohostport\""), ConfigError);
  RunConfig c = ParseConfig("[training]\nkey_bits = 1000");
  EXPECT_THROW(c.Validate(), ConfigError);
  c = ParseConfig("[dataset]\ntest_fraction = 1.0");
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_THROW(LoadConfig("/nonexistent/config.toml"), ConfigError);
}

TEST(ConfigFilesTest, BundledConfigsParse) {
  const auto dir = std::filesystem::path(BDFL_TEST_CONFIG_DIR);
  for (const char* name :
       {"breast_cancer.toml", "credit_card.toml", "synthetic.toml"}) {
    const RunConfig c = LoadConfig(dir / name);
    EXPECT_NO_THROW(c.Validate()) << name;
  }
  const RunConfig bc = LoadConfig(dir / "breast_cancer.toml");
  EXPECT_TRUE(std::filesystem::exists(bc.dataset.path)) << bc.dataset.path;
  EXPECT_EQ(bc.dataset.party_a_columns, Range(10, 29));
}

TEST(EnvironmentTest, FastModeShrinksKeys) {
  RunConfig c = Preset("breast_cancer");
  ::setenv("BDFL_TEST_FAST", "1", 1);
  ApplyEnvironment(c);
  EXPECT_EQ(c.training.key_bits, 512);
  ::unsetenv("BDFL_TEST_FAST");
  RunConfig d = Preset("breast_cancer");
  ApplyEnvironment(d);
  EXPECT_EQ(d.training.key_bits, 1024);
}

TEST(EnvironmentTest, DataDirOverride) {
  ::setenv("BDFL_DATA_DIR", "/elsewhere", 1);
  EXPECT_EQ(DataDir(), "/elsewhere");
  EXPECT_EQ(Preset("breast_cancer").dataset.path, "/elsewhere/breast_cancer.csv");
  ::unsetenv("BDFL_DATA_DIR");
  ::setenv("BDFL_CREDIT_CARD_CSV", "/tmp/cc.csv", 1);
  EXPECT_EQ(Preset("credit_card").dataset.path, "/tmp/cc.csv");
  ::unsetenv("BDFL_CREDIT_CARD_CSV");
}

TEST(LoadDatasetTest, SyntheticAndCsv) {
  DatasetConfig s;
  s.name = "synthetic";
  s.synthetic_rows = 50;
  s.synthetic_features_a = 2;
  s.synthetic_features_b = 3;
  const auto d = LoadDataset(s, 1);
  EXPECT_EQ(d.train_rows(), 40);
  EXPECT_EQ(d.x_b.cols(), 3);
  RunConfig bc = Preset("breast_cancer");
  bc.dataset.max_rows = 100;
  const auto small = LoadDataset(bc.dataset, 1);
  EXPECT_EQ(small.train_rows(), 80);
  EXPECT_EQ(small.x_a.cols(), 20);
  DatasetConfig missing = Preset("breast_cancer").dataset;
  missing.path = "/nonexistent.csv";
  EXPECT_THROW(LoadDataset(missing, 1), DataError);
}

}  // namespace
}  // namespace bdfl::experiment
