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

#include "bdfl/training.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "bdfl/crypto/paillier.h"
#include "bdfl/crypto/random.h"
#include "bdfl/error.h"

namespace bdfl {
namespace {

void AppendDouble(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void TrainingConfig::Validate() const {
  if (rounds <= 0) throw ConfigError("rounds must be positive");
  if (!(schedule.lr0 > 0.0) || !std::isfinite(schedule.lr0)) {
    throw ConfigError("learning rate must be positive and finite");
  }
  if (!(schedule.decay >= 0.0) || !std::isfinite(schedule.decay)) {
    throw ConfigError("learning-rate decay must be non-negative and finite");
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (!crypto::IsSupportedKeyBits(key_bits)) {
    throw ConfigError("key_bits must be one of 512, 1024, 2048, 3072");
  }
  if (scale_bits <= 0 || scale_bits > 4 * key_bits / 10) {
    throw ConfigError("scale_bits must be positive and well below key_bits");
  }
  if (!(curvature_eps >= 0.0)) {
    throw ConfigError("curvature_eps must be non-negative");
  }
  if (!std::isfinite(optimizer.alpha)) {
    throw ConfigError("alpha must be finite");
  }
}

std::string MetricsCsv(const std::vector<MetricsRecord>& records) {
  std::string out =
      "round,taylor_loss,exact_loss,test_accuracy,lr,curvature_skipped_A,"
      "curvature_skipped_B,msg_bytes\n";
  for (const auto& r : records) {
    out += std::to_string(r.round);
    out += ',';
    AppendDouble(out, r.taylor_loss);
    out += ',';
    AppendDouble(out, r.exact_loss);
    out += ',';
    AppendDouble(out, r.test_accuracy);
    out += ',';
    AppendDouble(out, r.lr);
    out += r.curvature_skipped_a ? ",1" : ",0";
    out += r.curvature_skipped_b ? ",1" : ",0";
    out += ',';
    out += std::to_string(r.msg_bytes);
    out += '\n';
  }
  return out;
}

void WriteMetricsCsv(const std::filesystem::path& path,
                     const std::vector<MetricsRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write metrics file " + path.string());
  out << MetricsCsv(records);
}

std::vector<std::size_t> BatchIndices(std::uint64_t seed, std::int64_t round,
                                      std::size_t rows,
                                      std::size_t batch_size) {
  std::vector<std::size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  if (batch_size == 0 || batch_size >= rows) return idx;
  crypto::SecureRng rng(seed ^ static_cast<std::uint64_t>(round),
                        "bdfl/minibatch");
  // Partial Fisher-Yates: the first batch_size slots become the sample.
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t j = i + rng.UniformIndex(rows - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(batch_size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

model::FeatureMatrix SelectRows(const model::FeatureMatrix& x,
                                const std::vector<std::size_t>& rows) {
  if (rows.size() == static_cast<std::size_t>(x.rows())) return x;
  model::FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        x.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

model::LabelVector SelectRows(const model::LabelVector& y,
                              const std::vector<std::size_t>& rows) {
  if (rows.size() == static_cast<std::size_t>(y.size())) return y;
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out[static_cast<Eigen::Index>(r)] = y[static_cast<Eigen::Index>(rows[r])];
  }
  return model::LabelVector(std::move(out));
}

bool WeightsConverged(std::int64_t round, const Vector& before,
                      const Vector& after, double tol) {
  if (round < 2) return false;
  const double change =
      before.size() == 0 ? 0.0 : (after - before).lpNorm<Eigen::Infinity>();
  return change < tol;
}

double TrainExactLoss(const data::VerticalDataset& data, const Vector& w_a,
                      const Vector& w_b) {
  const Vector u = model::ComputeU(w_a, data.x_a) + model::ComputeU(w_b, data.x_b);
  return model::ExactLoss(u, data.y);
}

double TestAccuracy(const data::VerticalDataset& data, const Vector& w_a,
                    const Vector& w_b) {
  if (data.test_rows() == 0) return 0.0;
  const Vector u = model::ComputeU(w_a, data.x_a_test) +
                   model::ComputeU(w_b, data.x_b_test);
  return model::Accuracy(model::Predict(u), data.y_test);
}

}  // namespace bdfl
