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

#include "bdfl/optim/quasi_newton.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "bdfl/error.h"

namespace bdfl::optim {
namespace {

Matrix Symmetrized(const Matrix& m) {
  Matrix s = m + m.transpose();
  s *= 0.5;
  return s;
}

void CheckPair(const Matrix& c, const Vector& dw, const Vector& dg) {
  if (c.rows() != c.cols() || c.rows() != dw.size() || dw.size() != dg.size()) {
    std::ostringstream msg;
    msg << "inverse-Hessian update: C is " << c.rows() << "x" << c.cols()
        << ", dw has " << dw.size() << ", dg has " << dg.size();
    throw DimensionError(msg.str());
  }
}

}  // namespace

OptimizerKind OptimizerKind::Parse(std::string_view raw, double alpha) {
  std::string name(raw);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (name == "gd" || name == "sgd") return Gd();
  if (name == "dfp") return Dfp();
  if (name == "bfgs") return Bfgs();
  if (name == "bdfl") {
    if (!std::isfinite(alpha)) throw ConfigError("bdfl alpha must be finite");
    return Bdfl(alpha);
  }
  throw ConfigError("unknown optimizer '" + std::string(name) +
                    "' (expected gd, dfp, bfgs or bdfl)");
}

std::string OptimizerKind::Name() const {
  switch (method) {
    case Method::kGd:
      return "gd";
    case Method::kDfp:
      return "dfp";
    case Method::kBfgs:
      return "bfgs";
    case Method::kBdfl:
      return "bdfl";
  }
  return "unknown";
}

bool CurvatureHolds(const Vector& dw, const Vector& dg, double eps) {
  const double inner = dw.dot(dg);
  return std::isfinite(inner) && inner > eps * dw.norm() * dg.norm() &&
         inner > 0.0;
}

std::optional<Matrix> DfpUpdate(const Matrix& c, const Vector& dw,
                                const Vector& dg, double eps) {
  CheckPair(c, dw, dg);
  if (!CurvatureHolds(dw, dg, eps)) return std::nullopt;
  const Vector c_dg = c * dg;
  const double denom = dg.dot(c_dg);
  if (!(denom > 0.0) || !std::isfinite(denom)) return std::nullopt;
  Matrix next = c + (dw * dw.transpose()) / dw.dot(dg) -
                (c_dg * c_dg.transpose()) / denom;
  return Symmetrized(next);
}

std::optional<Matrix> BfgsUpdate(const Matrix& c, const Vector& dw,
                                 const Vector& dg, double eps) {
  CheckPair(c, dw, dg);
  if (!CurvatureHolds(dw, dg, eps)) return std::nullopt;
  const double rho = 1.0 / dg.dot(dw);
  const Matrix identity = Matrix::Identity(c.rows(), c.cols());
  const Matrix left = identity - rho * dw * dg.transpose();
  const Matrix right = identity - rho * dg * dw.transpose();
  Matrix next = left * c * right + rho * dw * dw.transpose();
  return Symmetrized(next);
}

std::optional<Matrix> BdflUpdate(const Matrix& c, const Vector& dw,
                                 const Vector& dg, double alpha, double eps) {
  auto dfp = DfpUpdate(c, dw, dg, eps);
  auto bfgs = BfgsUpdate(c, dw, dg, eps);
  if (!dfp || !bfgs) return std::nullopt;
  Matrix blend = alpha * *dfp + (1.0 - alpha) * *bfgs;
  return blend;
}

std::optional<Matrix> UpdateInverseHessian(const Matrix& c, const Vector& dw,
                                           const Vector& dg,
                                           const OptimizerKind& kind,
                                           double eps) {
  switch (kind.method) {
    case OptimizerKind::Method::kGd:
      return c;
    case OptimizerKind::Method::kDfp:
      return DfpUpdate(c, dw, dg, eps);
    case OptimizerKind::Method::kBfgs:
      return BfgsUpdate(c, dw, dg, eps);
    case OptimizerKind::Method::kBdfl:
      return BdflUpdate(c, dw, dg, kind.alpha, eps);
  }
  return std::nullopt;
}

Vector Step(const Vector& w, const Vector& g, const Matrix& c, double lr,
            const OptimizerKind& kind) {
  if (w.size() != g.size()) {
    throw DimensionError("step: weight and gradient lengths differ");
  }
  if (!kind.IsQuasiNewton()) return w - lr * g;
  if (c.rows() != w.size() || c.cols() != w.size()) {
    throw DimensionError("step: inverse-Hessian shape does not match weights");
  }
  return w - lr * (c * g);
}

double LearningRate(const StepSchedule& schedule, std::int64_t k) {
  return schedule.lr0 / (1.0 + schedule.decay * static_cast<double>(k));
}

CurvatureState::CurvatureState(Eigen::Index dim)
    : c_(Matrix::Identity(dim, dim)) {}

void CurvatureState::Advance(const Vector& w_new, const Vector& g_new,
                             const OptimizerKind& kind, double curvature_eps) {
  if (w_new.size() != c_.rows() || g_new.size() != c_.rows()) {
    throw DimensionError("curvature advance: vector length does not match C");
  }
  last_skipped_ = false;
  if (prev_w_ && prev_g_ && kind.IsQuasiNewton()) {
    const Vector dw = w_new - *prev_w_;
    const Vector dg = g_new - *prev_g_;
    if (auto next = UpdateInverseHessian(c_, dw, dg, kind, curvature_eps)) {
      c_ = std::move(*next);
    } else {
      last_skipped_ = true;
    }
  }
  prev_w_ = w_new;
  prev_g_ = g_new;
  ++round_;
}

}  // namespace bdfl::optim
