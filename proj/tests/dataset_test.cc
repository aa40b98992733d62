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

#include "bdfl/data/dataset.h"

#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <set>

#include "bdfl/error.h"
#include "bdfl/oracle/plaintext_oracle.h"
#include "bdfl/training.h"
#include "test_util.h"

namespace bdfl::data {
namespace {

using ::bdfl::testing::BreastCancer;
using ::bdfl::testing::DataPath;
using ::bdfl::testing::ScratchDir;

std::filesystem::path WriteFile(const std::string& name,
                                const std::string& text) {
  const auto path = ScratchDir("csv_" + name) / (name + ".csv");
  std::ofstream(path) << text;
  return path;
}

TEST(LoadCsvTest, MapsLabels) {
  const RawTable t = LoadCsv(
      WriteFile("toy", "a,b,label\n1,2,0\n3,4,1\n5.5,-6,1.0\n"), {});
  ASSERT_EQ(t.features.rows(), 3);
  ASSERT_EQ(t.features.cols(), 2);
  EXPECT_EQ(t.features(2, 0), 5.5);
  EXPECT_EQ(t.labels[0], -1);
  EXPECT_EQ(t.labels[1], 1);
  EXPECT_EQ(t.labels[2], 1);
  EXPECT_EQ(t.feature_names, (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCsvTest, HonoursLabelColumnAndHeaderOptions) {
  CsvOptions opts;
  opts.label_column = 0;
  opts.has_header = false;
  opts.label_mapping = {{"M", 1}, {"B", -1}};
  const RawTable t = LoadCsv(WriteFile("opts", "M,1,2\nB,3,4\n"), opts);
  EXPECT_EQ(t.features.cols(), 2);
  EXPECT_EQ(t.labels[0], 1);
  EXPECT_EQ(t.labels[1], -1);
  EXPECT_EQ(t.features(1, 1), 4);
}

TEST(LoadCsvTest, ReportsErrors) {
  EXPECT_THROW(LoadCsv("/nonexistent/file.csv", {}), DataError);
  EXPECT_THROW(LoadCsv(WriteFile("ragged", "a,b,y\n1,2,0\n3,1\n"), {}),
               DataError);
  EXPECT_THROW(LoadCsv(WriteFile("unmapped", "a,y\n1,2\n"), {}), DataError);
  try {
    LoadCsv(WriteFile("text", "a,b,y\n1,2,0\n3,abc,1\n"), {});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("column"), std::string::npos) << what;
  }
}

TEST(BreastCancerTest, ShapeMatchesUciTable) {
  const RawTable raw = LoadCsv(DataPath("breast_cancer.csv"), {});
  EXPECT_EQ(raw.features.rows(), 569);
  EXPECT_EQ(raw.features.cols(), 30);
  const VerticalDataset d = BreastCancer();
  EXPECT_EQ(d.x_a.rows(), 455);
  EXPECT_EQ(d.x_a.cols(), 20);
  EXPECT_EQ(d.x_b.rows(), 455);
  EXPECT_EQ(d.x_b.cols(), 10);
  EXPECT_EQ(d.y.size(), 455);
  EXPECT_EQ(d.test_rows(), 114);
  EXPECT_EQ(d.x_b_test.rows(), 114);
}

TEST(SplitTest, TrainColumnsAreStandardized) {
  const VerticalDataset d = BreastCancer();
  for (const FeatureMatrix* x : {&d.x_a, &d.x_b}) {
    for (Eigen::Index j = 0; j < x->cols(); ++j) {
      const double mean = x->col(j).mean();
      const double var =
          (x->col(j).array() - mean).square().sum() / static_cast<double>(x->rows());
      EXPECT_LT(std::abs(mean), 1e-9);
      EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
    }
  }
}

TEST(SplitTest, SlicesReassembleTheStandardizedTable) {
  const RawTable raw = LoadCsv(DataPath("breast_cancer.csv"), {});
  SplitSpec spec;
  spec.party_a_columns = {10, 3, 29};
  spec.party_b_columns = ComplementColumns(spec.party_a_columns, 30);
  spec.seed = 5;
  const VerticalDataset d = SplitAndStandardize(raw, spec, 0.2);
  EXPECT_EQ(d.a_columns, spec.party_a_columns);
  EXPECT_EQ(d.b_columns.size(), 27u);
  std::set<int> all(d.a_columns.begin(), d.a_columns.end());
  all.insert(d.b_columns.begin(), d.b_columns.end());
  EXPECT_EQ(all.size(), 30u);
  // Each train row is some raw row; match it through column 10 then compare
  // every other column after undoing the z-score.
  for (Eigen::Index i = 0; i < 5; ++i) {
    const auto& s10 = d.standardization.at(10);
    const double raw10 = d.x_a(i, 0) * s10.stddev + s10.mean;
    Eigen::Index match = -1;
    for (Eigen::Index r = 0; r < raw.features.rows(); ++r) {
      if (std::abs(raw.features(r, 10) - raw10) < 1e-9 &&
          std::abs(raw.features(r, 3) -
                   (d.x_a(i, 1) * d.standardization.at(3).stddev +
                    d.standardization.at(3).mean)) < 1e-9) {
        match = r;
        break;
      }
    }
    ASSERT_GE(match, 0);
    EXPECT_EQ(d.y[i], raw.labels[match]);
    for (std::size_t k = 0; k < d.b_columns.size(); ++k) {
      const int col = d.b_columns[k];
      const auto& s = d.standardization.at(col);
      EXPECT_NEAR(d.x_b(i, static_cast<Eigen::Index>(k)) * s.stddev + s.mean,
                  raw.features(match, col), 1e-9);
    }
  }
}

TEST(SplitTest, RejectsNonPartition) {
  const RawTable raw = LoadCsv(DataPath("breast_cancer.csv"), {});
  SplitSpec spec;
  spec.party_a_columns = {0, 1};
  spec.party_b_columns = ComplementColumns({0}, 30);
  EXPECT_THROW(SplitAndStandardize(raw, spec, 0.2), DataError);
  spec.party_b_columns = ComplementColumns({0, 1, 2}, 30);
  EXPECT_THROW(SplitAndStandardize(raw, spec, 0.2), DataError);
}

TEST(SplitTest, DeterministicPerSeed) {
  const VerticalDataset a = BreastCancer(11);
  const VerticalDataset b = BreastCancer(11);
  const VerticalDataset c = BreastCancer(12);
  EXPECT_EQ(a.x_a, b.x_a);
  EXPECT_EQ(a.y.values(), b.y.values());
  EXPECT_EQ(a.x_b_test, b.x_b_test);
  EXPECT_NE(a.x_a, c.x_a);
}

TEST(SplitTest, ZeroTestFractionLeavesEmptyTestSplit) {
  const RawTable raw = LoadCsv(DataPath("breast_cancer.csv"), {});
  SplitSpec spec;
  for (int j = 0; j < 15; ++j) spec.party_a_columns.push_back(j);
  spec.party_b_columns = ComplementColumns(spec.party_a_columns, 30);
  const VerticalDataset d = SplitAndStandardize(raw, spec, 0.0);
  EXPECT_EQ(d.train_rows(), 569);
  EXPECT_EQ(d.test_rows(), 0);
  EXPECT_EQ(d.x_b_test.rows(), 0);
  EXPECT_EQ(d.y_test.size(), 0);
}

TEST(SplitTest, ConstantColumnIsDroppedWithWarning) {
  const RawTable raw = LoadCsv(
      WriteFile("const", "a,b,c,y\n1,7,2,0\n2,7,1,1\n3,7,5,0\n4,7,3,1\n5,7,0,1\n"),
      {});
  SplitSpec spec;
  spec.party_a_columns = {0, 1};
  spec.party_b_columns = {2};
  const VerticalDataset d = SplitAndStandardize(raw, spec, 0.2);
  EXPECT_EQ(d.dropped_columns, std::vector<int>{1});
  EXPECT_EQ(d.x_a.cols(), 1);
  EXPECT_FALSE(d.warnings.empty());
}

TEST(SubsampleTest, KeepsRequestedRows) {
  const RawTable raw = LoadCsv(DataPath("breast_cancer.csv"), {});
  EXPECT_EQ(Subsample(raw, 100, 3).features.rows(), 100);
  EXPECT_EQ(Subsample(raw, 0, 3).features.rows(), 569);
  EXPECT_EQ(Subsample(raw, 10000, 3).features.rows(), 569);
  EXPECT_EQ(Subsample(raw, 50, 3).features, Subsample(raw, 50, 3).features);
}

TEST(SyntheticTest, ShapesAndDeterminism) {
  const SyntheticModel a = SyntheticDataset(200, 3, 2, 9, 4.0);
  const SyntheticModel b = SyntheticDataset(200, 3, 2, 9, 4.0);
  EXPECT_EQ(a.data.train_rows(), 160);
  EXPECT_EQ(a.data.test_rows(), 40);
  EXPECT_EQ(a.data.x_a.cols(), 3);
  EXPECT_EQ(a.data.x_b.cols(), 2);
  EXPECT_EQ(a.planted_weights, b.planted_weights);
  EXPECT_NEAR(a.planted_weights.norm(), 1.0, 1e-12);
  EXPECT_EQ(a.data.x_a, b.data.x_a);
  EXPECT_THROW(SyntheticDataset(0, 3, 2, 9, 4.0), DataError);
}

TEST(SyntheticTest, WideSeparationIsLearnedPerfectly) {
  const SyntheticModel m = SyntheticDataset(300, 3, 3, 4, 12.0);
  TrainingConfig config;
  config.optimizer = optim::OptimizerKind::Gd();
  config.rounds = 200;
  config.tol = 1e-12;
  const TrainingResult r = oracle::OracleRun(config, m.data);
  const model::Vector u = model::ComputeU(r.w_a, m.data.x_a) +
                          model::ComputeU(r.w_b, m.data.x_b);
  EXPECT_EQ(model::Accuracy(model::Predict(u), m.data.y), 1.0);
}

}  // namespace
}  // namespace bdfl::data
