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

#ifndef SUPLEARN_DYNAMICS_H_
#define SUPLEARN_DYNAMICS_H_

// Controlled ODEs x' = f(t, x, u), RK4 integration under zero-order-hold
// inputs, and reach-set point clouds built from input-path ensembles.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "suplearn/geometry.h"
#include "suplearn/sampling.h"

namespace suplearn {

struct VectorField {
  using Rate = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& u)>;
  std::string name;
  Eigen::Index state_dim = 0;
  Eigen::Index input_dim = 0;
  Rate rate;

  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& u) const {
    return rate(t, x, u);
  }
};

// Dubins car: x1' = v cos x3, x2' = v sin x3, x3' = u.
VectorField DubinsModel(double speed = 2.0);

// Kinematic bicycle with sideslip beta = atan(0.6 tan u2):
// x1' = x3 cos(x4 + beta), x2' = x3 sin(x4 + beta), x3' = u1,
// x4' = x3 sin(beta) / 1.5.
VectorField BicycleModel();

inline constexpr double kDefaultSubstep = 0.005;

// One classical RK4 step with the input held constant. Throws NumericalError
// naming t when the result is not finite.
Eigen::VectorXd Rk4Step(const VectorField& f, double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u_held, double dt);

// Integrates from time_grid(0) to `t_end` (default: the last grid time).
// inputs.row(k) is held on [time_grid(k), time_grid(k+1)). Each interval is
// split into ceil(length / dt_sub) equal RK4 steps. Angles are not wrapped.
Eigen::VectorXd IntegratePath(const VectorField& f, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& time_grid,
                              const Eigen::MatrixXd& inputs, double dt_sub,
                              std::optional<double> t_end = std::nullopt);

struct ReachCloud {
  double time = 0.0;
  PointCloud<double> cloud;
  std::string model;
  std::uint64_t ensemble_seed = 0;
};

// One terminal state per ensemble path.
ReachCloud ComputeReachCloud(const VectorField& f, const Eigen::VectorXd& x0,
                             const InputPathEnsemble& ensemble,
                             double dt_sub = kDefaultSubstep,
                             std::optional<double> t_end = std::nullopt);

// Adds i.i.d. N(0, sigma^2) noise to every coordinate. sigma = 0 returns the
// cloud unchanged.
PointCloud<double> AddNoise(const PointCloud<double>& cloud, double sigma,
                            std::uint64_t seed);

}  // namespace suplearn

#endif  // SUPLEARN_DYNAMICS_H_
