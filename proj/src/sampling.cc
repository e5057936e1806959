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

#include "suplearn/sampling.h"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "suplearn/errors.h"
#include "suplearn/normal.h"

namespace suplearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckBox(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
              const char* what) {
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw ValidationError(std::string(what) + ": bound dimensions differ or are empty");
  }
  for (Eigen::Index k = 0; k < lower.size(); ++k) {
    if (!(lower(k) < upper(k))) {
      throw ValidationError(std::string(what) + ": need lower < upper at index " +
                            std::to_string(k));
    }
  }
}

class WhitenedGibbs {
 public:
  WhitenedGibbs(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper)
      : mean_(mean), lower_(lower), upper_(upper), chol_(JitteredCholesky(cov)) {
    const Eigen::Index n = mean_.size();
    if (cov.rows() != n || cov.cols() != n || lower_.size() != n) {
      throw ValidationError("SampleTruncatedMvnGibbs: dimension mismatch");
    }
    CheckBox(lower_, upper_, "SampleTruncatedMvnGibbs");
    // Start from the mean pulled into the box; w solves L w = x - mean.
    x_ = mean_.cwiseMax(lower_).cwiseMin(upper_);
    w_ = chol_.triangularView<Eigen::Lower>().solve(x_ - mean_);
    x_ = mean_ + chol_ * w_;
  }

  void Sweep(std::mt19937_64& rng) {
    const Eigen::Index n = mean_.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      double lo = -kInf;
      double hi = kInf;
      const double wk = w_(k);
      // L is lower triangular: w_k only moves x_i for i >= k.
      for (Eigen::Index i = k; i < n; ++i) {
        const double l_ik = chol_(i, k);
        if (l_ik == 0.0) continue;
        const double rest = x_(i) - l_ik * wk;
        double a = (lower_(i) - rest) / l_ik;
        double b = (upper_(i) - rest) / l_ik;
        if (l_ik < 0.0) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
      }
      // Rounding can make the current point sit marginally outside; keep w_k.
      if (!(lo <= hi)) continue;
      const double next = SampleTruncatedStandardNormal(lo, hi, rng);
      w_(k) = next;
      x_.tail(n - k) += chol_.col(k).tail(n - k) * (next - wk);
    }
    x_ = mean_ + chol_.triangularView<Eigen::Lower>() * w_;
  }

  Eigen::VectorXd State() const { return x_.cwiseMax(lower_).cwiseMin(upper_); }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd w_;
  Eigen::VectorXd x_;
};

}  // namespace

Hyperrectangle::Hyperrectangle(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  CheckBox(lower, upper, "Hyperrectangle");
}

bool Hyperrectangle::Contains(const Eigen::VectorXd& u) const {
  return u.size() == dim() && (u.array() >= lower.array()).all() &&
         (u.array() <= upper.array()).all();
}

void GpConfig::Validate() const {
  if (!(length_scale > 0.0)) throw ValidationError("GpConfig: length_scale must be > 0");
  if (time_grid.size() < 1) throw ValidationError("GpConfig: empty time grid");
  for (Eigen::Index k = 1; k < time_grid.size(); ++k) {
    if (!(time_grid(k) > time_grid(k - 1))) {
      throw ValidationError("GpConfig: time grid not strictly increasing at index " +
                            std::to_string(k));
    }
  }
}

Eigen::VectorXd UniformTimeGrid(double t_final, Eigen::Index count) {
  if (!(t_final > 0.0) || count < 2) {
    throw ValidationError("UniformTimeGrid: need t_final > 0 and count >= 2");
  }
  return Eigen::VectorXd::LinSpaced(count, 0.0, t_final);
}

Eigen::MatrixXd GramMatrix(const Eigen::VectorXd& time_grid, double length_scale) {
  GpConfig{length_scale, time_grid}.Validate();
  const Eigen::Index n = time_grid.size();
  Eigen::MatrixXd g(n, n);
  const double scale = 1.0 / (2.0 * length_scale * length_scale);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double dt = time_grid(i) - time_grid(j);
      g(i, j) = g(j, i) = std::exp(-dt * dt * scale);
    }
  }
  return g;
}

Eigen::MatrixXd JitteredCholesky(const Eigen::MatrixXd& cov, double jitter) {
  if (cov.rows() != cov.cols()) throw ValidationError("JitteredCholesky: not square");
  Eigen::MatrixXd shifted = cov;
  shifted.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "covariance factorization failed after jitter " << jitter
        << " (min eigenvalue " << eig.eigenvalues().minCoeff() << ", max eigenvalue "
        << eig.eigenvalues().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  Eigen::MatrixXd l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any()) {
    throw NumericalError("covariance factorization produced a nonpositive pivot");
  }
  return l;
}

Eigen::VectorXd SampleTruncatedMvnGibbs(const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& cov,
                                        const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const GibbsOptions& opts,
                                        std::uint64_t seed) {
  return SampleTruncatedMvnChain(mean, cov, lower, upper, opts, 1, seed).col(0);
}

Eigen::MatrixXd SampleTruncatedMvnChain(const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& cov,
                                        const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const GibbsOptions& opts, Eigen::Index count,
                                        std::uint64_t seed) {
  if (opts.burn_in < 0 || opts.sweeps_between_samples < 1 || count < 1) {
    throw ValidationError("SampleTruncatedMvnChain: invalid chain options");
  }
  WhitenedGibbs chain(mean, cov, lower, upper);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < opts.burn_in; ++s) chain.Sweep(rng);
  Eigen::MatrixXd out(mean.size(), count);
  for (Eigen::Index c = 0; c < count; ++c) {
    for (int s = 0; s < opts.sweeps_between_samples; ++s) chain.Sweep(rng);
    out.col(c) = chain.State();
  }
  return out;
}

std::mt19937_64 DerivedRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

InputPathEnsemble SampleConstrainedGpPaths(const GpConfig& cfg,
                                           const Hyperrectangle& bounds,
                                           Eigen::Index n_paths, std::uint64_t seed,
                                           const GibbsOptions& opts) {
  cfg.Validate();
  CheckBox(bounds.lower, bounds.upper, "SampleConstrainedGpPaths");
  if (n_paths < 1) throw ValidationError("SampleConstrainedGpPaths: n_paths must be >= 1");
  const Eigen::Index steps = cfg.time_grid.size();
  const Eigen::Index channels = bounds.dim();
  const Eigen::MatrixXd gram = GramMatrix(cfg.time_grid, cfg.length_scale);
  const Eigen::VectorXd center = bounds.center();

  InputPathEnsemble out;
  out.time_grid = cfg.time_grid;
  out.bounds = bounds;
  out.length_scale = cfg.length_scale;
  out.seed = seed;
  out.paths.reserve(static_cast<std::size_t>(n_paths));
  for (Eigen::Index p = 0; p < n_paths; ++p) {
    Eigen::MatrixXd path(steps, channels);
    for (Eigen::Index c = 0; c < channels; ++c) {
      const Eigen::VectorXd mean = Eigen::VectorXd::Constant(steps, center(c));
      const Eigen::VectorXd lo = Eigen::VectorXd::Constant(steps, bounds.lower(c));
      const Eigen::VectorXd hi = Eigen::VectorXd::Constant(steps, bounds.upper(c));
      std::mt19937_64 stream = DerivedRng(seed, static_cast<std::uint64_t>(p),
                                          static_cast<std::uint64_t>(c));
      path.col(c) = SampleTruncatedMvnGibbs(mean, gram, lo, hi, opts, stream());
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace suplearn
