// Copyright 2026 The suplearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUPLEARN_REGRESS_ISNN_H_
#define SUPLEARN_REGRESS_ISNN_H_

// Input-sublinear neural network: an input-convex ReLU network without
// biases. With hidden widths w_1..w_L,
//
//   z_1     = relu(Wy_0 y)
//   z_{l+1} = relu(Wz_l z_l + Wy_l y),        l = 1..L-1
//   out     = Wz_L z_L + Wy_L y               (linear output layer)
//
// Every Wz_l is kept elementwise nonnegative. Positive homogeneity of relu
// and the absence of biases make `out` a sublinear function of y for every
// such parameter value, so the network is a support function by
// construction. The passthrough weights Wy_l are unconstrained.

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "suplearn/geometry.h"

namespace suplearn {

struct IsnnArchitecture {
  Eigen::Index input_dim = 0;
  std::vector<Eigen::Index> hidden = {5, 20, 50, 20, 5};

  void Validate() const;
  Eigen::Index num_hidden() const { return static_cast<Eigen::Index>(hidden.size()); }
};

// passthrough[l] = Wy_l (l = 0..L), shapes w_{l+1} x d and finally 1 x d.
// feedforward[l - 1] = Wz_l (l = 1..L), shapes w_{l+1} x w_l and finally
// 1 x w_L.
template <typename Scalar>
struct IsnnParams {
  std::vector<MatrixX<Scalar>> passthrough;
  std::vector<MatrixX<Scalar>> feedforward;

  Eigen::Index input_dim() const {
    return passthrough.empty() ? 0 : passthrough.front().cols();
  }

  template <typename NewScalar>
  IsnnParams<NewScalar> cast() const {
    IsnnParams<NewScalar> out;
    for (const auto& w : passthrough) out.passthrough.push_back(w.template cast<NewScalar>());
    for (const auto& w : feedforward) out.feedforward.push_back(w.template cast<NewScalar>());
    return out;
  }
};

// Shape checks: layer chaining consistent, output width 1.
template <typename Scalar>
void CheckIsnnShapes(const IsnnParams<Scalar>& params) {
  const std::size_t layers = params.feedforward.size();
  if (layers < 1 || params.passthrough.size() != layers + 1) {
    throw ValidationError("IsnnParams: need L >= 1 feedforward and L + 1 passthrough matrices");
  }
  const Eigen::Index d = params.input_dim();
  for (const auto& w : params.passthrough) CheckDimension(d, w.cols(), "IsnnParams passthrough");
  for (std::size_t l = 0; l < layers; ++l) {
    CheckDimension(params.passthrough[l].rows(), params.feedforward[l].cols(),
                   "IsnnParams feedforward input");
    CheckDimension(params.passthrough[l + 1].rows(), params.feedforward[l].rows(),
                   "IsnnParams feedforward output");
  }
  CheckDimension(1, params.passthrough.back().rows(), "IsnnParams output width");
}

// Network output for each column of `inputs` (d x B), as a 1 x B row.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> IsnnForwardBatch(
    const IsnnParams<Scalar>& params, const Eigen::MatrixBase<Derived>& inputs) {
  CheckDimension(params.input_dim(), inputs.rows(), "IsnnForward");
  const MatrixX<Scalar> y = inputs.template cast<Scalar>();
  MatrixX<Scalar> z = (params.passthrough[0] * y).cwiseMax(Scalar(0));
  const std::size_t layers = params.feedforward.size();
  for (std::size_t l = 1; l < layers; ++l) {
    z = (params.feedforward[l - 1] * z + params.passthrough[l] * y).cwiseMax(Scalar(0));
  }
  return params.feedforward[layers - 1] * z + params.passthrough[layers] * y;
}

template <typename Scalar, typename Derived>
Scalar IsnnForward(const IsnnParams<Scalar>& params,
                   const Eigen::MatrixBase<Derived>& y) {
  return IsnnForwardBatch(params, y)(0);
}

// Wz <- max(Wz, 0) elementwise; passthrough weights untouched.
template <typename Scalar>
IsnnParams<Scalar> ProjectNonneg(IsnnParams<Scalar> params) {
  for (auto& w : params.feedforward) w = w.cwiseMax(Scalar(0));
  return params;
}

struct IsnnGradient {
  IsnnParams<double> grad;  // same shapes as the parameters
  double loss = 0.0;        // mean squared error over the batch
};

// Reverse-mode gradient of (1/B) sum_b (forward(y_b) - t_b)^2. The relu
// derivative at 0 is taken as 0.
IsnnGradient IsnnBackward(const IsnnParams<double>& params,
                          const Eigen::MatrixXd& inputs,
                          const Eigen::VectorXd& targets);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 40;
  int batch_size = 0;  // 0: full batch
  // Train against targets divided by their root mean square and fold the
  // factor into the output layer afterwards.
  bool scale_targets = true;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Passthrough weights ~ N(0, 1 / fan_in); feedforward weights ~ |N(0, 1)| /
// fan_in, which keeps activations O(|y|) through the nonnegative stack.
IsnnParams<double> InitIsnn(const IsnnArchitecture& arch, std::uint64_t seed);

struct IsnnModel {
  IsnnArchitecture arch;
  IsnnParams<double> params;
  AdamConfig adam;
  std::vector<double> loss_history;  // full-data MSE after each epoch
  double seconds = 0.0;
};

// Projected Adam: after every minibatch update the feedforward weights are
// projected onto the nonnegative orthant. Minibatches come from a seeded
// per-epoch shuffle. Throws NumericalError on a non-finite loss.
IsnnModel TrainIsnn(const SupportSamples<double>& samples, const IsnnArchitecture& arch,
                    const AdamConfig& adam);

SupportFunction<double> AsSupportFunction(const IsnnModel& model);

}  // namespace suplearn

#endif  // SUPLEARN_REGRESS_ISNN_H_
