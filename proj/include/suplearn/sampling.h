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

#ifndef SUPLEARN_SAMPLING_H_
#define SUPLEARN_SAMPLING_H_

// Constrained Gaussian-process input paths valued in a hyperrectangle.
//
// Each input channel is an independent GP with squared-exponential kernel
// and mean at the channel's centre, discretized on a time grid and
// conditioned on the box via a truncated multivariate normal. The truncated
// normal is sampled by exact-conditional Gibbs sweeps in whitened
// coordinates x = mean + L w (L L^T = covariance): each w_k is redrawn from
// its 1-D truncated standard normal full conditional, the truncation interval
// being the set of w_k that keep every coordinate of x inside the box.

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <vector>

namespace suplearn {

struct Hyperrectangle {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Hyperrectangle() = default;
  Hyperrectangle(Eigen::VectorXd lo, Eigen::VectorXd hi);

  Eigen::Index dim() const { return lower.size(); }
  Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
  bool Contains(const Eigen::VectorXd& u) const;
};

struct GpConfig {
  double length_scale = 0.7;
  Eigen::VectorXd time_grid;

  void Validate() const;
};

// K uniform points on [0, t_final].
Eigen::VectorXd UniformTimeGrid(double t_final, Eigen::Index count = 101);

// Sample paths: paths[p] is K x m (row k = input at time_grid(k)).
struct InputPathEnsemble {
  std::vector<Eigen::MatrixXd> paths;
  Eigen::VectorXd time_grid;
  Hyperrectangle bounds;
  double length_scale = 0.0;
  std::uint64_t seed = 0;

  Eigen::Index num_paths() const { return static_cast<Eigen::Index>(paths.size()); }
  Eigen::Index input_dim() const { return bounds.dim(); }
};

inline constexpr double kGramJitter = 1e-8;

// G_ij = exp(-(t_i - t_j)^2 / (2 l^2)).
Eigen::MatrixXd GramMatrix(const Eigen::VectorXd& time_grid, double length_scale);

struct GibbsOptions {
  int burn_in = 100;
  int sweeps_between_samples = 5;
};

// Lower Cholesky factor of cov + jitter I; throws NumericalError with a
// condition estimate when the factorization fails.
Eigen::MatrixXd JitteredCholesky(const Eigen::MatrixXd& cov,
                                 double jitter = kGramJitter);

// Runs a fresh chain (starting at the box-clamped mean) for burn_in +
// sweeps_between_samples sweeps and returns the final state. Sweep order is
// 0..K-1. The returned sample lies in [lower, upper] exactly.
Eigen::VectorXd SampleTruncatedMvnGibbs(const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& cov,
                                        const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const GibbsOptions& opts,
                                        std::uint64_t seed);

// One chain, `count` retained samples (columns) spaced by
// sweeps_between_samples after burn_in.
Eigen::MatrixXd SampleTruncatedMvnChain(const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& cov,
                                        const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const GibbsOptions& opts, Eigen::Index count,
                                        std::uint64_t seed);

// n_x independent paths; path p, channel c uses an RNG stream derived from
// (seed, p, c).
InputPathEnsemble SampleConstrainedGpPaths(const GpConfig& cfg,
                                           const Hyperrectangle& bounds,
                                           Eigen::Index n_paths, std::uint64_t seed,
                                           const GibbsOptions& opts = {});

// RNG seeded from a tuple of integers.
std::mt19937_64 DerivedRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace suplearn

#endif  // SUPLEARN_SAMPLING_H_
