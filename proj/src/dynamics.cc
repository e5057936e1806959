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

#include "suplearn/dynamics.h"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "suplearn/errors.h"

namespace suplearn {

VectorField DubinsModel(double speed) {
  if (!(speed > 0.0)) throw ValidationError("DubinsModel: speed must be > 0");
  VectorField f;
  f.name = "dubins";
  f.state_dim = 3;
  f.input_dim = 1;
  f.rate = [speed](double, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    Eigen::VectorXd dx(3);
    dx << speed * std::cos(x(2)), speed * std::sin(x(2)), u(0);
    return dx;
  };
  return f;
}

VectorField BicycleModel() {
  VectorField f;
  f.name = "bicycle";
  f.state_dim = 4;
  f.input_dim = 2;
  f.rate = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const double beta = std::atan(0.6 * std::tan(u(1)));
    Eigen::VectorXd dx(4);
    dx << x(2) * std::cos(x(3) + beta), x(2) * std::sin(x(3) + beta), u(0),
        x(2) * std::sin(beta) / 1.5;
    return dx;
  };
  return f;
}

Eigen::VectorXd Rk4Step(const VectorField& f, double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u_held, double dt) {
  if (!(dt > 0.0)) throw ValidationError("Rk4Step: dt must be > 0");
  const Eigen::VectorXd k1 = f(t, x, u_held);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1, u_held);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2, u_held);
  const Eigen::VectorXd k4 = f(t + dt, x + dt * k3, u_held);
  Eigen::VectorXd next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite state after RK4 step at t = " << t;
    throw NumericalError(msg.str());
  }
  return next;
}

Eigen::VectorXd IntegratePath(const VectorField& f, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& time_grid,
                              const Eigen::MatrixXd& inputs, double dt_sub,
                              std::optional<double> t_end) {
  CheckDimension(f.state_dim, x0.size(), "IntegratePath state");
  CheckDimension(f.input_dim, inputs.cols(), "IntegratePath input");
  CheckDimension(time_grid.size(), inputs.rows(), "IntegratePath time grid");
  if (!(dt_sub > 0.0)) throw ValidationError("IntegratePath: dt_sub must be > 0");
  const Eigen::Index steps = time_grid.size();
  const double stop = t_end.value_or(time_grid(steps - 1));
  if (stop < time_grid(0) || stop > time_grid(steps - 1)) {
    throw ValidationError("IntegratePath: t_end outside the time grid");
  }
  Eigen::VectorXd x = x0;
  for (Eigen::Index k = 0; k + 1 < steps && time_grid(k) < stop; ++k) {
    const double t0 = time_grid(k);
    const double t1 = std::min(time_grid(k + 1), stop);
    const double length = t1 - t0;
    // Guard against ceil rounding 400.0000000001 up.
    const auto n = static_cast<int>(std::max(1.0, std::ceil(length / dt_sub - 1e-9)));
    const double h = length / n;
    const Eigen::VectorXd u = inputs.row(k).transpose();
    for (int s = 0; s < n; ++s) x = Rk4Step(f, t0 + s * h, x, u, h);
  }
  return x;
}

ReachCloud ComputeReachCloud(const VectorField& f, const Eigen::VectorXd& x0,
                             const InputPathEnsemble& ensemble, double dt_sub,
                             std::optional<double> t_end) {
  CheckDimension(f.input_dim, ensemble.input_dim(), "ComputeReachCloud");
  if (ensemble.num_paths() < 1) throw ValidationError("ComputeReachCloud: empty ensemble");
  Eigen::MatrixXd points(f.state_dim, ensemble.num_paths());
  for (Eigen::Index p = 0; p < ensemble.num_paths(); ++p) {
    try {
      points.col(p) = IntegratePath(f, x0, ensemble.time_grid,
                                    ensemble.paths[static_cast<std::size_t>(p)], dt_sub, t_end);
    } catch (const NumericalError& e) {
      throw NumericalError("path " + std::to_string(p) + ": " + e.what());
    }
  }
  ReachCloud out;
  out.time = t_end.value_or(ensemble.time_grid(ensemble.time_grid.size() - 1));
  out.cloud = PointCloud<double>(std::move(points));
  out.model = f.name;
  out.ensemble_seed = ensemble.seed;
  return out;
}

PointCloud<double> AddNoise(const PointCloud<double>& cloud, double sigma,
                            std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ValidationError("AddNoise: sigma must be >= 0");
  if (sigma == 0.0) return cloud;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::MatrixXd points = cloud.matrix();
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) points(i, j) += normal(rng);
  }
  return PointCloud<double>(std::move(points));
}

}  // namespace suplearn
