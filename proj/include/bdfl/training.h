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

#ifndef BDFL_TRAINING_H_
#define BDFL_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bdfl/crypto/fixed_point.h"
#include "bdfl/data/dataset.h"
#include "bdfl/optim/quasi_newton.h"

namespace bdfl {

using model::Vector;

// Hyperparameters shared by the federated protocol and the plaintext oracle.
struct TrainingConfig {
  optim::OptimizerKind optimizer = optim::OptimizerKind::Bfgs();
  // Hard cap E on protocol rounds.
  int rounds = 100;
  optim::StepSchedule schedule{0.1, 0.05};
  // Both parties converge once |w_k - w_{k-1}|_inf < tol.
  double tol = 1e-6;
  std::uint64_t seed = 42;
  int key_bits = 1024;
  int scale_bits = crypto::kDefaultScaleBits;
  double curvature_eps = optim::kDefaultCurvatureEps;
  // 0 selects full-batch rounds.
  std::size_t batch_size = 0;
  // Seeded key generation and encryption randomness. When false every party
  // draws from the OS entropy pool and runs no longer replay.
  bool deterministic = true;

  // Throws ConfigError.
  void Validate() const;
};

// One completed protocol round.
struct MetricsRecord {
  std::int64_t round = 0;
  // Taylor loss at the round's input weights, over the round's batch.
  double taylor_loss = 0.0;
  // Exact logistic loss at the same weights over the full training split.
  double exact_loss = 0.0;
  // Test accuracy of the weights produced by the round.
  double test_accuracy = 0.0;
  double lr = 0.0;
  bool curvature_skipped_a = false;
  bool curvature_skipped_b = false;
  std::uint64_t msg_bytes = 0;
  double wall_ms = 0.0;
};

// Header: round,taylor_loss,exact_loss,test_accuracy,lr,curvature_skipped_A,
// curvature_skipped_B,msg_bytes. Wall time is deliberately left out so that
// identical runs produce identical files.
std::string MetricsCsv(const std::vector<MetricsRecord>& records);
void WriteMetricsCsv(const std::filesystem::path& path,
                     const std::vector<MetricsRecord>& records);

struct WeightSnapshot {
  Vector w_a;
  Vector w_b;
};

struct TrainingResult {
  Vector w_a;
  Vector w_b;
  std::vector<MetricsRecord> metrics;
  // Weights after each round; trajectory[k - 1] belongs to round k.
  std::vector<WeightSnapshot> trajectory;
  bool converged = false;

  std::int64_t rounds_executed() const {
    return static_cast<std::int64_t>(metrics.size());
  }
  double final_test_accuracy() const {
    return metrics.empty() ? 0.0 : metrics.back().test_accuracy;
  }
};

// Row indices of round `round` (1-based). Full batch yields 0..rows-1;
// otherwise a seeded sample without replacement, sorted ascending, that both
// data parties derive identically from the shared seed.
std::vector<std::size_t> BatchIndices(std::uint64_t seed, std::int64_t round,
                                      std::size_t rows,
                                      std::size_t batch_size);

// Rows of `x` listed in `rows`.
model::FeatureMatrix SelectRows(const model::FeatureMatrix& x,
                                const std::vector<std::size_t>& rows);
model::LabelVector SelectRows(const model::LabelVector& y,
                              const std::vector<std::size_t>& rows);

// Convergence test for one party after an update: never on the first round.
bool WeightsConverged(std::int64_t round, const Vector& before,
                      const Vector& after, double tol);

// Exact training loss at (w_a, w_b).
double TrainExactLoss(const data::VerticalDataset& data, const Vector& w_a,
                      const Vector& w_b);
// Test accuracy of (w_a, w_b); 0 for an empty test split.
double TestAccuracy(const data::VerticalDataset& data, const Vector& w_a,
                    const Vector& w_b);

}  // namespace bdfl

#endif  // BDFL_TRAINING_H_
