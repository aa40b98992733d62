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

#ifndef BDFL_OPTIM_QUASI_NEWTON_H_
#define BDFL_OPTIM_QUASI_NEWTON_H_

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bdfl::optim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Inverse-Hessian update rule. GD keeps C at the identity.
struct OptimizerKind {
  enum class Method { kGd, kDfp, kBfgs, kBdfl };

  Method method = Method::kGd;
  // Blend weight on the DFP update; only read for kBdfl.
  double alpha = 0.5;

  static OptimizerKind Gd() { return {Method::kGd, 0.5}; }
  static OptimizerKind Dfp() { return {Method::kDfp, 0.5}; }
  static OptimizerKind Bfgs() { return {Method::kBfgs, 0.5}; }
  static OptimizerKind Bdfl(double alpha) { return {Method::kBdfl, alpha}; }

  // "gd" (alias "sgd"), "dfp", "bfgs" or "bdfl". Throws ConfigError.
  static OptimizerKind Parse(std::string_view name, double alpha = 0.5);
  std::string Name() const;
  bool IsQuasiNewton() const { return method != Method::kGd; }
};

inline constexpr double kDefaultCurvatureEps = 1e-10;

// Delta-w . Delta-g > eps * |Delta-w| |Delta-g|
bool CurvatureHolds(const Vector& dw, const Vector& dg, double eps);

// C + dw dw^T / (dw^T dg) - (C dg)(C dg)^T / (dg^T C dg). nullopt when the
// curvature condition or dg^T C dg > 0 fails.
std::optional<Matrix> DfpUpdate(const Matrix& c, const Vector& dw,
                                const Vector& dg,
                                double eps = kDefaultCurvatureEps);

// (I - rho dw dg^T) C (I - rho dg dw^T) + rho dw dw^T, rho = 1 / (dg^T dw).
std::optional<Matrix> BfgsUpdate(const Matrix& c, const Vector& dw,
                                 const Vector& dg,
                                 double eps = kDefaultCurvatureEps);

// alpha * DFP + (1 - alpha) * BFGS, both from the same C.
std::optional<Matrix> BdflUpdate(const Matrix& c, const Vector& dw,
                                 const Vector& dg, double alpha,
                                 double eps = kDefaultCurvatureEps);

// Dispatches on `kind`; GD returns C unchanged.
std::optional<Matrix> UpdateInverseHessian(const Matrix& c, const Vector& dw,
                                           const Vector& dg,
                                           const OptimizerKind& kind,
                                           double eps);

// w - lr * g for GD, w - lr * C g otherwise. Throws DimensionError.
Vector Step(const Vector& w, const Vector& g, const Matrix& c, double lr,
            const OptimizerKind& kind);

struct StepSchedule {
  double lr0 = 0.1;
  double decay = 0.0;
};

// lr0 / (1 + decay * k), k >= 0.
double LearningRate(const StepSchedule& schedule, std::int64_t k);

// One party's inverse-Hessian approximation over its own coordinates.
class CurvatureState {
 public:
  explicit CurvatureState(Eigen::Index dim);

  const Matrix& c() const { return c_; }
  const std::optional<Vector>& prev_w() const { return prev_w_; }
  const std::optional<Vector>& prev_g() const { return prev_g_; }
  std::int64_t round() const { return round_; }
  // Whether the most recent Advance skipped the C update on the curvature
  // safeguard.
  bool last_skipped() const { return last_skipped_; }

  // First call stores the (w, g) snapshot and leaves C = I. Later calls form
  // dw, dg against the snapshot, apply the kind's update when the curvature
  // condition holds (keeping C otherwise), and refresh the snapshot.
  void Advance(const Vector& w_new, const Vector& g_new,
               const OptimizerKind& kind,
               double curvature_eps = kDefaultCurvatureEps);

 private:
  Matrix c_;
  std::optional<Vector> prev_w_;
  std::optional<Vector> prev_g_;
  std::int64_t round_ = 0;
  bool last_skipped_ = false;
};

}  // namespace bdfl::optim

#endif  // BDFL_OPTIM_QUASI_NEWTON_H_
