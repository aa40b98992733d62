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

#include "bdfl/oracle/plaintext_oracle.h"

#include <chrono>

#include "bdfl/model/taylor_logistic.h"
#include "bdfl/optim/quasi_newton.h"

namespace bdfl::oracle {
namespace {

enum class Objective { kTaylor, kExact };

TrainingResult Train(const TrainingConfig& config,
                     const data::VerticalDataset& data, Objective objective) {
  config.Validate();
  TrainingConfig effective = config;
  if (objective == Objective::kExact) {
    effective.optimizer = optim::OptimizerKind::Gd();
    effective.batch_size = 0;
  }
  const auto& kind = effective.optimizer;

  Vector w_a = Vector::Zero(data.x_a.cols());
  Vector w_b = Vector::Zero(data.x_b.cols());
  optim::CurvatureState curv_a(w_a.size());
  optim::CurvatureState curv_b(w_b.size());

  TrainingResult result;
  const auto rows = static_cast<std::size_t>(data.train_rows());
  for (std::int64_t round = 1; round <= effective.rounds; ++round) {
    const auto start = std::chrono::steady_clock::now();
    const auto batch =
        BatchIndices(effective.seed, round, rows, effective.batch_size);
    const model::FeatureMatrix x_a = SelectRows(data.x_a, batch);
    const model::FeatureMatrix x_b = SelectRows(data.x_b, batch);
    const model::LabelVector y = SelectRows(data.y, batch);

    const Vector u_a = model::ComputeU(w_a, x_a);
    const Vector u_b = model::ComputeU(w_b, x_b);
    const Vector u = u_a + u_b;

    MetricsRecord rec;
    rec.round = round;
    rec.taylor_loss = model::TaylorLoss(u_a, u_b, y);
    rec.exact_loss = TrainExactLoss(data, w_a, w_b);

    const Vector residual = objective == Objective::kTaylor
                                ? model::ComputeD(u, y)
                                : model::ExactResidual(u, y);
    const Vector g_a = model::GradientSlice(residual, x_a);
    const Vector g_b = model::GradientSlice(residual, x_b);

    const double lr = optim::LearningRate(effective.schedule, round - 1);
    curv_a.Advance(w_a, g_a, kind, effective.curvature_eps);
    curv_b.Advance(w_b, g_b, kind, effective.curvature_eps);
    Vector next_a = optim::Step(w_a, g_a, curv_a.c(), lr, kind);
    Vector next_b = optim::Step(w_b, g_b, curv_b.c(), lr, kind);

    const bool done_a = WeightsConverged(round, w_a, next_a, effective.tol);
    const bool done_b = WeightsConverged(round, w_b, next_b, effective.tol);
    w_a = std::move(next_a);
    w_b = std::move(next_b);

    rec.lr = lr;
    rec.curvature_skipped_a = curv_a.last_skipped();
    rec.curvature_skipped_b = curv_b.last_skipped();
    rec.test_accuracy = TestAccuracy(data, w_a, w_b);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    result.metrics.push_back(rec);
    result.trajectory.push_back({w_a, w_b});
    if (done_a && done_b) {
      result.converged = true;
      break;
    }
  }
  result.w_a = std::move(w_a);
  result.w_b = std::move(w_b);
  return result;
}

}  // namespace

TrainingResult OracleRun(const TrainingConfig& config,
                         const data::VerticalDataset& data) {
  return Train(config, data, Objective::kTaylor);
}

TrainingResult OracleExactGd(const TrainingConfig& config,
                             const data::VerticalDataset& data) {
  return Train(config, data, Objective::kExact);
}

}  // namespace bdfl::oracle
