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

#ifndef BDFL_MODEL_TAYLOR_LOGISTIC_H_
#define BDFL_MODEL_TAYLOR_LOGISTIC_H_

#include <Eigen/Dense>

#include <cstddef>

namespace bdfl::model {

using Vector = Eigen::VectorXd;
// One sample per row, one (party-local) feature per column.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Labels in {-1, +1}.
class LabelVector {
 public:
  LabelVector() = default;
  // Throws DataError on any entry other than -1 or +1.
  explicit LabelVector(Vector values);

  const Vector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

 private:
  Vector values_;
};

// u[i] = w . x_i
Vector ComputeU(const Vector& w, const FeatureMatrix& x);

// Residual of the Taylor loss: d[i] = (u[i] - 2 y[i]) / 4.
Vector ComputeD(const Vector& u_total, const LabelVector& y);

// g = (1/T) sum_i d[i] x_i over the columns of `x`.
Vector GradientSlice(const Vector& d, const FeatureMatrix& x);

// Mean of log2 - y (uA + uB) / 2 + (uA^2 + 2 uA uB + uB^2) / 8.
double TaylorLoss(const Vector& u_a, const Vector& u_b, const LabelVector& y);

// Mean of log(1 + exp(-y u)), evaluated as a softplus that cannot overflow.
double ExactLoss(const Vector& u_total, const LabelVector& y);

// Residual of the exact loss, r[i] = -y[i] * sigmoid(-y[i] u[i]); feeding it
// to GradientSlice gives the exact-loss gradient.
Vector ExactResidual(const Vector& u_total, const LabelVector& y);

// +1 where u >= threshold, else -1. Threshold 0 is sigmoid(u) >= 1/2.
LabelVector Predict(const Vector& u_total, double threshold = 0.0);

// Fraction of matching labels; 0 for empty input.
double Accuracy(const LabelVector& predicted, const LabelVector& truth);

}  // namespace bdfl::model

#endif  // BDFL_MODEL_TAYLOR_LOGISTIC_H_
