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

#include "bdfl/model/taylor_logistic.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bdfl/error.h"

namespace bdfl::model {
namespace {

void RequireSameLength(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": length mismatch (" << a << " vs " << b << ")";
    throw DimensionError(msg.str());
  }
}

double Softplus(double z) {
  // log(1 + e^z)
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LabelVector::LabelVector(Vector values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (values_[i] != 1.0 && values_[i] != -1.0) {
      std::ostringstream msg;
      msg << "label " << values_[i] << " at index " << i << " is not -1 or +1";
      throw DataError(msg.str());
    }
  }
}

Vector ComputeU(const Vector& w, const FeatureMatrix& x) {
  RequireSameLength(x.cols(), w.size(), "compute_u");
  if (x.cols() == 0) return Vector::Zero(x.rows());
  return x * w;
}

Vector ComputeD(const Vector& u_total, const LabelVector& y) {
  RequireSameLength(u_total.size(), y.size(), "compute_d");
  return (u_total - 2.0 * y.values()) / 4.0;
}

Vector GradientSlice(const Vector& d, const FeatureMatrix& x) {
  RequireSameLength(d.size(), x.rows(), "gradient");
  if (x.rows() == 0) return Vector::Zero(x.cols());
  return (x.transpose() * d) / static_cast<double>(x.rows());
}

double TaylorLoss(const Vector& u_a, const Vector& u_b, const LabelVector& y) {
  RequireSameLength(u_a.size(), u_b.size(), "taylor_loss");
  RequireSameLength(u_a.size(), y.size(), "taylor_loss");
  if (y.size() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = u_a[i];
    const double b = u_b[i];
    sum += std::numbers::ln2 - 0.5 * y[i] * (a + b) +
           0.125 * (a * a + 2.0 * a * b + b * b);
  }
  return sum / static_cast<double>(y.size());
}

double ExactLoss(const Vector& u_total, const LabelVector& y) {
  RequireSameLength(u_total.size(), y.size(), "exact_loss");
  if (y.size() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    sum += Softplus(-y[i] * u_total[i]);
  }
  return sum / static_cast<double>(y.size());
}

Vector ExactResidual(const Vector& u_total, const LabelVector& y) {
  RequireSameLength(u_total.size(), y.size(), "exact_residual");
  Vector r(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    r[i] = -y[i] * Sigmoid(-y[i] * u_total[i]);
  }
  return r;
}

LabelVector Predict(const Vector& u_total, double threshold) {
  Vector labels(u_total.size());
  for (Eigen::Index i = 0; i < u_total.size(); ++i) {
    labels[i] = u_total[i] >= threshold ? 1.0 : -1.0;
  }
  return LabelVector(std::move(labels));
}

double Accuracy(const LabelVector& predicted, const LabelVector& truth) {
  RequireSameLength(predicted.size(), truth.size(), "accuracy");
  if (truth.size() == 0) return 0.0;
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace bdfl::model
