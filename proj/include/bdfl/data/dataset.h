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

#ifndef BDFL_DATA_DATASET_H_
#define BDFL_DATA_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bdfl/model/taylor_logistic.h"

namespace bdfl::data {

using model::FeatureMatrix;
using model::LabelVector;

struct CsvOptions {
  // Index of the label column among all CSV columns; negative counts from
  // the end (-1 is the last column).
  int label_column = -1;
  bool has_header = true;
  // Raw label cell -> {-1, +1}. Numeric cells match numerically ("1.0" hits
  // key "1").
  std::map<std::string, int> label_mapping = {{"0", -1}, {"1", 1}};
};

struct RawTable {
  FeatureMatrix features;
  LabelVector labels;
  std::vector<std::string> feature_names;
};

// Throws DataError for a missing file, a ragged row, a non-numeric cell
// (reported as row/column) or an unmapped label.
RawTable LoadCsv(const std::filesystem::path& path, const CsvOptions& options);

struct SplitSpec {
  std::vector<int> party_a_columns;
  std::vector<int> party_b_columns;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct ColumnStats {
  double mean = 0.0;
  double stddev = 1.0;
};

struct VerticalDataset {
  FeatureMatrix x_a;
  FeatureMatrix x_b;
  LabelVector y;
  FeatureMatrix x_a_test;
  FeatureMatrix x_b_test;
  LabelVector y_test;
  // Global feature indices in the order of x_a's, then x_b's, columns.
  std::vector<int> a_columns;
  std::vector<int> b_columns;
  // Per global feature index; identity stats when standardisation is off.
  std::map<int, ColumnStats> standardization;
  // Zero-variance columns removed before routing.
  std::vector<int> dropped_columns;
  std::vector<std::string> warnings;

  Eigen::Index train_rows() const { return x_a.rows(); }
  Eigen::Index test_rows() const { return x_a_test.rows(); }
};

// Seeded Fisher-Yates shuffle of the rows, then the first
// floor((1 - test_fraction) * T) rows train and the rest test. Z-scores are
// fitted on train only. Throws DataError when the column sets do not
// partition the features.
VerticalDataset SplitAndStandardize(const RawTable& raw, const SplitSpec& spec,
                                    double test_fraction,
                                    bool standardize = true);

// Every index in [0, n_features) not listed in `party_a`.
std::vector<int> ComplementColumns(const std::vector<int>& party_a,
                                   int n_features);

// Keeps the first `max_rows` rows after a seeded shuffle; no-op when
// max_rows is 0 or covers the table.
RawTable Subsample(const RawTable& raw, std::size_t max_rows,
                   std::uint64_t seed);

struct SyntheticModel {
  VerticalDataset data;
  // Unit-norm planted direction over A's then B's features.
  model::Vector planted_weights;
};

// Two Gaussian classes centred at +/- (separation / 2) * planted_weights with
// identity covariance; A holds the first n_a features. Throws DataError for
// rows == 0.
SyntheticModel SyntheticDataset(std::size_t rows, int n_a, int n_b,
                                std::uint64_t seed, double separation,
                                double test_fraction = 0.2);

}  // namespace bdfl::data

#endif  // BDFL_DATA_DATASET_H_
