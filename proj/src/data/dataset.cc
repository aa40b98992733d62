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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

#include "bdfl/crypto/random.h"
#include "bdfl/error.h"

namespace bdfl::data {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '"')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitLine(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool ParseDouble(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() &&
         std::isfinite(out);
}

int MapLabel(std::string_view cell, const CsvOptions& options,
             std::size_t line_no) {
  if (auto it = options.label_mapping.find(std::string(cell));
      it != options.label_mapping.end()) {
    return it->second;
  }
  double value = 0.0;
  if (ParseDouble(cell, value)) {
    for (const auto& [key, label] : options.label_mapping) {
      double k = 0.0;
      if (ParseDouble(key, k) && k == value) return label;
    }
  }
  std::ostringstream msg;
  msg << "line " << line_no << ": label '" << cell
      << "' has no entry in the label mapping";
  throw DataError(msg.str());
}

std::vector<std::size_t> ShuffledOrder(std::size_t n, std::uint64_t seed,
                                       std::string_view domain) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  crypto::SecureRng rng(seed, domain);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.UniformIndex(i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

FeatureMatrix Gather(const FeatureMatrix& src,
                     const std::vector<std::size_t>& rows,
                     const std::vector<int>& cols) {
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          src(static_cast<Eigen::Index>(rows[r]), cols[c]);
    }
  }
  return out;
}

}  // namespace

RawTable LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file " + path.string());

  RawTable table;
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  std::size_t label_index = 0;

  auto resolve_width = [&](std::size_t cells) {
    width = cells;
    const long idx = options.label_column < 0
                         ? static_cast<long>(cells) + options.label_column
                         : options.label_column;
    if (idx < 0 || idx >= static_cast<long>(cells)) {
      throw DataError("label column " + std::to_string(options.label_column) +
                      " is outside a " + std::to_string(cells) +
                      "-column file");
    }
    label_index = static_cast<std::size_t>(idx);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitLine(line);
    if (width == 0) {
      resolve_width(cells.size());
      if (options.has_header) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (c != label_index) table.feature_names.emplace_back(cells[c]);
        }
        continue;
      }
    }
    if (cells.size() != width) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << width << " cells, found "
          << cells.size();
      throw DataError(msg.str());
    }
    std::vector<double> row;
    row.reserve(width - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_index) continue;
      double v = 0.0;
      if (!ParseDouble(cells[c], v)) {
        std::ostringstream msg;
        msg << "line " << line_no << ", column " << c
            << ": non-numeric cell '" << cells[c] << "'";
        throw DataError(msg.str());
      }
      row.push_back(v);
    }
    labels.push_back(MapLabel(cells[label_index], options, line_no));
    rows.push_back(std::move(row));
  }
  if (width == 0) throw DataError("dataset file " + path.string() + " is empty");

  const auto n_features = static_cast<Eigen::Index>(width - 1);
  table.features.resize(static_cast<Eigen::Index>(rows.size()), n_features);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < n_features; ++c) {
      table.features(static_cast<Eigen::Index>(r), c) = rows[r][c];
    }
  }
  table.labels = LabelVector(
      Eigen::Map<const model::Vector>(labels.data(),
                                      static_cast<Eigen::Index>(labels.size())));
  if (table.feature_names.empty()) {
    for (Eigen::Index c = 0; c < n_features; ++c) {
      table.feature_names.push_back("x" + std::to_string(c));
    }
  }
  return table;
}

std::vector<int> ComplementColumns(const std::vector<int>& party_a,
                                   int n_features) {
  const std::set<int> taken(party_a.begin(), party_a.end());
  std::vector<int> rest;
  for (int c = 0; c < n_features; ++c) {
    if (!taken.contains(c)) rest.push_back(c);
  }
  return rest;
}

RawTable Subsample(const RawTable& raw, std::size_t max_rows,
                   std::uint64_t seed) {
  const auto rows = static_cast<std::size_t>(raw.features.rows());
  if (max_rows == 0 || max_rows >= rows) return raw;
  auto order = ShuffledOrder(rows, seed, "bdfl/subsample");
  order.resize(max_rows);
  std::sort(order.begin(), order.end());
  std::vector<int> all_cols(static_cast<std::size_t>(raw.features.cols()));
  std::iota(all_cols.begin(), all_cols.end(), 0);
  RawTable out;
  out.features = Gather(raw.features, order, all_cols);
  model::Vector labels(static_cast<Eigen::Index>(max_rows));
  for (std::size_t i = 0; i < max_rows; ++i) {
    labels[static_cast<Eigen::Index>(i)] =
        raw.labels[static_cast<Eigen::Index>(order[i])];
  }
  out.labels = LabelVector(std::move(labels));
  out.feature_names = raw.feature_names;
  return out;
}

VerticalDataset SplitAndStandardize(const RawTable& raw, const SplitSpec& spec,
                                    double test_fraction, bool standardize) {
  const auto n_features = static_cast<int>(raw.features.cols());
  const auto total = static_cast<std::size_t>(raw.features.rows());
  if (raw.labels.size() != raw.features.rows()) {
    throw DataError("feature and label row counts differ");
  }
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw DataError("test_fraction must lie in [0, 1)");
  }

  std::vector<int> seen(static_cast<std::size_t>(n_features), 0);
  for (const auto* cols : {&spec.party_a_columns, &spec.party_b_columns}) {
    for (int c : *cols) {
      if (c < 0 || c >= n_features) {
        throw DataError("feature column " + std::to_string(c) +
                        " is out of range");
      }
      ++seen[static_cast<std::size_t>(c)];
    }
  }
  for (int c = 0; c < n_features; ++c) {
    if (seen[static_cast<std::size_t>(c)] != 1) {
      throw DataError("party column sets must partition the features; column " +
                      std::to_string(c) + " is assigned " +
                      std::to_string(seen[static_cast<std::size_t>(c)]) +
                      " times");
    }
  }

  std::vector<std::size_t> order(total);
  if (spec.shuffle) {
    order = ShuffledOrder(total, spec.seed, "bdfl/split");
  } else {
    std::iota(order.begin(), order.end(), 0);
  }
  // Tiny slack keeps e.g. 0.8 * 30000 from landing just below 24000.
  const auto train_rows = static_cast<std::size_t>(
      std::floor((1.0 - test_fraction) * static_cast<double>(total) + 1e-9));
  const std::vector<std::size_t> train(order.begin(),
                                       order.begin() + train_rows);
  const std::vector<std::size_t> test(order.begin() + train_rows, order.end());

  VerticalDataset out;
  std::vector<int> all_cols(static_cast<std::size_t>(n_features));
  std::iota(all_cols.begin(), all_cols.end(), 0);
  FeatureMatrix train_full = Gather(raw.features, train, all_cols);
  FeatureMatrix test_full = Gather(raw.features, test, all_cols);

  std::set<int> dropped;
  for (int c = 0; c < n_features; ++c) {
    ColumnStats stats;
    if (standardize && !train.empty()) {
      const auto col = train_full.col(c);
      stats.mean = col.mean();
      const double var = (col.array() - stats.mean).square().mean();
      stats.stddev = std::sqrt(var);
      if (!(stats.stddev > 1e-12 * std::max(1.0, std::abs(stats.mean)))) {
        dropped.insert(c);
        out.dropped_columns.push_back(c);
        out.warnings.push_back("dropped zero-variance feature column " +
                               std::to_string(c));
        continue;
      }
      train_full.col(c) = (train_full.col(c).array() - stats.mean) / stats.stddev;
      if (test_full.rows() > 0) {
        test_full.col(c) = (test_full.col(c).array() - stats.mean) / stats.stddev;
      }
    }
    out.standardization[c] = stats;
  }

  for (int c : spec.party_a_columns) {
    if (!dropped.contains(c)) out.a_columns.push_back(c);
  }
  for (int c : spec.party_b_columns) {
    if (!dropped.contains(c)) out.b_columns.push_back(c);
  }

  std::vector<std::size_t> train_idx(train.size());
  std::iota(train_idx.begin(), train_idx.end(), 0);
  std::vector<std::size_t> test_idx(test.size());
  std::iota(test_idx.begin(), test_idx.end(), 0);
  out.x_a = Gather(train_full, train_idx, out.a_columns);
  out.x_b = Gather(train_full, train_idx, out.b_columns);
  out.x_a_test = Gather(test_full, test_idx, out.a_columns);
  out.x_b_test = Gather(test_full, test_idx, out.b_columns);

  model::Vector y_train(static_cast<Eigen::Index>(train.size()));
  for (std::size_t i = 0; i < train.size(); ++i) {
    y_train[static_cast<Eigen::Index>(i)] =
        raw.labels[static_cast<Eigen::Index>(train[i])];
  }
  model::Vector y_test(static_cast<Eigen::Index>(test.size()));
  for (std::size_t i = 0; i < test.size(); ++i) {
    y_test[static_cast<Eigen::Index>(i)] =
        raw.labels[static_cast<Eigen::Index>(test[i])];
  }
  out.y = LabelVector(std::move(y_train));
  out.y_test = LabelVector(std::move(y_test));
  return out;
}

SyntheticModel SyntheticDataset(std::size_t rows, int n_a, int n_b,
                                std::uint64_t seed, double separation,
                                double test_fraction) {
  if (rows == 0) throw DataError("synthetic dataset needs at least one row");
  if (n_a < 0 || n_b < 0) throw DataError("feature counts must be non-negative");
  const int n = n_a + n_b;
  crypto::SecureRng rng(seed, "bdfl/synthetic");

  model::Vector planted(n);
  for (int j = 0; j < n; ++j) planted[j] = rng.Gaussian();
  if (n > 0 && planted.norm() > 0) planted.normalize();

  RawTable raw;
  raw.features.resize(static_cast<Eigen::Index>(rows), n);
  model::Vector labels(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const double y = (rng() & 1u) ? 1.0 : -1.0;
    labels[static_cast<Eigen::Index>(i)] = y;
    for (int j = 0; j < n; ++j) {
      raw.features(static_cast<Eigen::Index>(i), j) =
          y * 0.5 * separation * planted[j] + rng.Gaussian();
    }
  }
  raw.labels = LabelVector(std::move(labels));

  SplitSpec spec;
  for (int j = 0; j < n_a; ++j) spec.party_a_columns.push_back(j);
  for (int j = n_a; j < n; ++j) spec.party_b_columns.push_back(j);
  spec.seed = seed;
  spec.shuffle = false;
  return SyntheticModel{SplitAndStandardize(raw, spec, test_fraction, false),
                        std::move(planted)};
}

}  // namespace bdfl::data
