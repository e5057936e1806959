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

#include "suplearn/regress_isnn.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "suplearn/errors.h"

namespace suplearn {

namespace {

// Applies one Adam step to every matrix in `params` in place.
class AdamState {
 public:
  AdamState(const IsnnParams<double>& params, const AdamConfig& cfg) : cfg_(cfg) {
    for (const auto& w : params.passthrough) {
      m_.passthrough.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& w : params.feedforward) {
      m_.feedforward.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    v_ = m_;
  }

  void Step(IsnnParams<double>& params, const IsnnParams<double>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    auto update = [&](Eigen::MatrixXd& w, Eigen::MatrixXd& m, Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& g) {
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseAbs2();
      w.array() -= cfg_.learning_rate * (m.array() / c1) /
                   ((v.array() / c2).sqrt() + cfg_.epsilon);
    };
    for (std::size_t l = 0; l < params.passthrough.size(); ++l) {
      update(params.passthrough[l], m_.passthrough[l], v_.passthrough[l],
             grad.passthrough[l]);
    }
    for (std::size_t l = 0; l < params.feedforward.size(); ++l) {
      update(params.feedforward[l], m_.feedforward[l], v_.feedforward[l],
             grad.feedforward[l]);
    }
  }

 private:
  AdamConfig cfg_;
  IsnnParams<double> m_;
  IsnnParams<double> v_;
  int t_ = 0;
};

double MeanSquaredError(const IsnnParams<double>& params, const Eigen::MatrixXd& inputs,
                        const Eigen::VectorXd& targets) {
  const Eigen::RowVectorXd pred = IsnnForwardBatch(params, inputs);
  return (pred.transpose() - targets).squaredNorm() / static_cast<double>(targets.size());
}

}  // namespace

void IsnnArchitecture::Validate() const {
  if (input_dim < 1) throw ValidationError("IsnnArchitecture: input_dim must be >= 1");
  if (hidden.empty()) throw ValidationError("IsnnArchitecture: need at least one hidden layer");
  for (Eigen::Index w : hidden) {
    if (w < 1) throw ValidationError("IsnnArchitecture: widths must be >= 1");
  }
}

void AdamConfig::Validate() const {
  if (!(learning_rate > 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) ||
      !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0) || epochs < 0 || batch_size < 0) {
    throw ValidationError("AdamConfig: invalid optimizer settings");
  }
}

IsnnGradient IsnnBackward(const IsnnParams<double>& params, const Eigen::MatrixXd& inputs,
                          const Eigen::VectorXd& targets) {
  CheckIsnnShapes(params);
  CheckDimension(params.input_dim(), inputs.rows(), "IsnnBackward inputs");
  CheckDimension(inputs.cols(), targets.size(), "IsnnBackward targets");
  if (inputs.cols() < 1) throw ValidationError("IsnnBackward: empty batch");
  const std::size_t layers = params.feedforward.size();
  const double batch = static_cast<double>(inputs.cols());

  // Forward pass keeping post-activations z_1..z_L.
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers);
  acts.push_back((params.passthrough[0] * inputs).cwiseMax(0.0));
  for (std::size_t l = 1; l < layers; ++l) {
    acts.push_back(
        (params.feedforward[l - 1] * acts.back() + params.passthrough[l] * inputs)
            .cwiseMax(0.0));
  }
  const Eigen::RowVectorXd pred =
      params.feedforward[layers - 1] * acts.back() + params.passthrough[layers] * inputs;
  const Eigen::RowVectorXd err = pred - targets.transpose();

  IsnnGradient out;
  out.loss = err.squaredNorm() / batch;
  out.grad.passthrough.resize(layers + 1);
  out.grad.feedforward.resize(layers);

  // delta = dLoss / d(pre-activation) of the current layer.
  Eigen::MatrixXd delta = (2.0 / batch) * err;
  out.grad.feedforward[layers - 1] = delta * acts[layers - 1].transpose();
  out.grad.passthrough[layers] = delta * inputs.transpose();
  for (std::size_t l = layers; l-- > 0;) {
    // Back through Wz into z_{l+1} (acts[l]), then through its relu.
    Eigen::MatrixXd dz = params.feedforward[l].transpose() * delta;
    delta = (acts[l].array() > 0.0).select(dz, 0.0);
    out.grad.passthrough[l] = delta * inputs.transpose();
    if (l > 0) out.grad.feedforward[l - 1] = delta * acts[l - 1].transpose();
  }
  return out;
}

IsnnParams<double> InitIsnn(const IsnnArchitecture& arch, std::uint64_t seed) {
  arch.Validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols, double scale) {
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) w(i, j) = scale * normal(rng);
    }
    return w;
  };
  const Eigen::Index d = arch.input_dim;
  IsnnParams<double> params;
  Eigen::Index prev = 0;
  for (std::size_t l = 0; l <= arch.hidden.size(); ++l) {
    const Eigen::Index width = (l < arch.hidden.size()) ? arch.hidden[l] : 1;
    const double fan_in = static_cast<double>(prev + d);
    params.passthrough.push_back(gaussian(width, d, 1.0 / std::sqrt(fan_in)));
    if (l > 0) {
      params.feedforward.push_back(
          gaussian(width, prev, 1.0 / static_cast<double>(prev)).cwiseAbs());
    }
    prev = width;
  }
  return params;
}

IsnnModel TrainIsnn(const SupportSamples<double>& samples, const IsnnArchitecture& arch,
                    const AdamConfig& adam) {
  arch.Validate();
  adam.Validate();
  CheckDimension(arch.input_dim, samples.dim(), "TrainIsnn");
  const auto start = std::chrono::steady_clock::now();

  IsnnModel model;
  model.arch = arch;
  model.adam = adam;
  model.params = InitIsnn(arch, adam.seed);

  const Eigen::MatrixXd& inputs = samples.directions.matrix();
  // Fit targets / scale, then fold the scale into the output layer. Scaling
  // the output by a positive constant keeps the network sublinear.
  double scale = 1.0;
  if (adam.scale_targets && adam.epochs > 0) {
    const double rms = std::sqrt(samples.values.squaredNorm() / static_cast<double>(samples.size()));
    if (rms > 0.0) scale = rms;
  }
  const Eigen::VectorXd targets = samples.values / scale;
  const Eigen::Index n = samples.size();
  const Eigen::Index batch =
      (adam.batch_size == 0) ? n : std::min<Eigen::Index>(adam.batch_size, n);

  AdamState optimizer(model.params, adam);
  std::mt19937_64 shuffle_rng(adam.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  for (int epoch = 0; epoch < adam.epochs; ++epoch) {
    if (batch < n) std::shuffle(order.begin(), order.end(), shuffle_rng);
    int batch_index = 0;
    for (Eigen::Index begin = 0; begin < n; begin += batch, ++batch_index) {
      const Eigen::Index size = std::min(batch, n - begin);
      Eigen::MatrixXd x(inputs.rows(), size);
      Eigen::VectorXd t(size);
      for (Eigen::Index k = 0; k < size; ++k) {
        const Eigen::Index idx = order[static_cast<std::size_t>(begin + k)];
        x.col(k) = inputs.col(idx);
        t(k) = targets(idx);
      }
      const IsnnGradient g = IsnnBackward(model.params, x, t);
      if (!std::isfinite(g.loss)) {
        throw NumericalError("TrainIsnn: non-finite loss at epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(batch_index));
      }
      optimizer.Step(model.params, g.grad);
      model.params = ProjectNonneg(std::move(model.params));
    }
    const double loss = scale * scale * MeanSquaredError(model.params, inputs, targets);
    if (!std::isfinite(loss)) {
      throw NumericalError("TrainIsnn: non-finite loss after epoch " + std::to_string(epoch));
    }
    model.loss_history.push_back(loss);
  }
  model.params.feedforward.back() *= scale;
  model.params.passthrough.back() *= scale;
  model.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

SupportFunction<double> AsSupportFunction(const IsnnModel& model) {
  return SupportFunction<double>(model.arch.input_dim,
                                 [params = model.params](const Eigen::VectorXd& z) {
                                   return IsnnForward(params, z);
                                 });
}

}  // namespace suplearn
