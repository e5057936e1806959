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

#include "suplearn/qp_admm.h"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "suplearn/errors.h"

namespace suplearn {

namespace {

constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;

double InfNorm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double primal_scale = 0.0;
  double dual_scale = 0.0;
};

class Kkt {
 public:
  Kkt(const Eigen::MatrixXd& p, const Eigen::MatrixXd& ata, double sigma)
      : p_(p), ata_(ata), sigma_(sigma) {}

  void Factor(double rho) {
    Eigen::MatrixXd m = p_ + rho * ata_;
    m.diagonal().array() += sigma_;
    llt_.compute(m);
    if (llt_.info() != Eigen::Success) {
      throw NumericalError("ADMM: KKT factorization failed");
    }
  }

  Eigen::VectorXd Solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }

 private:
  const Eigen::MatrixXd& p_;
  const Eigen::MatrixXd& ata_;
  double sigma_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct Polished {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double primal = 0.0;
  double dual = 0.0;
};

// Equality-constrained QP on one working set, through the regularized
// quasi-definite KKT system [P + dI, A^T; A, -dI] with iterative refinement.
// `at_upper[k]` selects the bound imposed on working row k.
struct WorkingSetSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // one multiplier per working row
};

std::optional<WorkingSetSolution> SolveWorkingSet(
    const Eigen::MatrixXd& p, const Eigen::VectorXd& q,
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& rows,
    const std::vector<Eigen::Index>& working, const Eigen::VectorXd& bound) {
  constexpr double kDelta = 1e-7;
  constexpr int kRefineSteps = 30;
  const Eigen::Index n = q.size();
  const auto nw = static_cast<Eigen::Index>(working.size());
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index k = 0; k < nw; ++k) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             rows, working[static_cast<std::size_t>(k)]);
         it; ++it) {
      entries.emplace_back(k, it.col(), it.value());
    }
  }
  Eigen::SparseMatrix<double> a_w(nw, n);
  a_w.setFromTriplets(entries.begin(), entries.end());
  const Eigen::SparseMatrix<double> a_w_t = a_w.transpose();

  Eigen::MatrixXd normal = p + Eigen::MatrixXd(a_w_t * a_w) / kDelta;
  normal.diagonal().array() += kDelta;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success) return std::nullopt;

  WorkingSetSolution sol{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(nw)};
  for (int step = 0; step < kRefineSteps; ++step) {
    const Eigen::VectorXd rx = -q - p * sol.x - a_w_t * sol.y;
    const Eigen::VectorXd ry = bound - a_w * sol.x;
    if (step > 0 && InfNorm(rx) < 1e-14 && InfNorm(ry) < 1e-14) break;
    const Eigen::VectorXd dx = ldlt.solve(rx + a_w_t * ry / kDelta);
    sol.x += dx;
    sol.y += (a_w * dx - ry) / kDelta;
  }
  if (!sol.x.allFinite() || !sol.y.allFinite()) return std::nullopt;
  return sol;
}

// Active-set polishing. Starts from the working set suggested by (z, y),
// then alternately adds violated rows and drops rows whose multipliers have
// the wrong sign until the full KKT conditions hold to tolerance.
std::optional<Polished> Polish(const Eigen::MatrixXd& p, const Eigen::VectorXd& q,
                               const Eigen::SparseMatrix<double>& a,
                               const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                               const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                               const AdmmSettings& settings) {
  constexpr int kMaxRounds = 3;
  const Eigen::Index m = lower.size();
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = a;
  const Eigen::SparseMatrix<double> at = a.transpose();

  // 0: inactive, +1: held at upper, -1: held at lower.
  std::vector<int> state(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (upper(i) - z(i) < y(i)) state[static_cast<std::size_t>(i)] = 1;
    else if (z(i) - lower(i) < -y(i)) state[static_cast<std::size_t>(i)] = -1;
  }

  for (int round = 0; round < kMaxRounds; ++round) {
    std::vector<Eigen::Index> working;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (state[static_cast<std::size_t>(i)] != 0) working.push_back(i);
    }
    Eigen::VectorXd bound(static_cast<Eigen::Index>(working.size()));
    for (std::size_t k = 0; k < working.size(); ++k) {
      const Eigen::Index i = working[k];
      bound(static_cast<Eigen::Index>(k)) = state[static_cast<std::size_t>(i)] > 0 ? upper(i) : lower(i);
    }
    const auto sol = SolveWorkingSet(p, q, rows, working, bound);
    if (!sol) return std::nullopt;

    Polished out;
    out.x = sol->x;
    out.y = Eigen::VectorXd::Zero(m);
    double sign_violation = 0.0;
    bool changed = false;
    for (std::size_t k = 0; k < working.size(); ++k) {
      const Eigen::Index i = working[k];
      const double yk = sol->y(static_cast<Eigen::Index>(k));
      out.y(i) = yk;
      const double wrong = state[static_cast<std::size_t>(i)] > 0 ? -yk : yk;
      sign_violation = std::max(sign_violation, wrong);
      if (wrong > settings.dual_tol && lower(i) != upper(i)) {
        state[static_cast<std::size_t>(i)] = 0;
        changed = true;
      }
    }
    const Eigen::VectorXd ax = a * out.x;
    out.primal = std::max({0.0, (ax - upper).maxCoeff(), (lower - ax).maxCoeff()});
    for (Eigen::Index i = 0; i < m; ++i) {
      auto& s = state[static_cast<std::size_t>(i)];
      if (s == 0 && ax(i) > upper(i) + settings.primal_tol) { s = 1; changed = true; }
      if (s == 0 && ax(i) < lower(i) - settings.primal_tol) { s = -1; changed = true; }
    }
    const Eigen::VectorXd px = p * out.x;
    const Eigen::VectorXd aty = at * out.y;
    out.dual = std::max(InfNorm(px + q + aty), sign_violation);
    const double dual_scale = std::max({InfNorm(px), InfNorm(aty), InfNorm(q)});
    if (out.primal <= settings.primal_tol &&
        out.dual <= settings.dual_tol + settings.relative_tol * dual_scale) {
      return out;
    }
    if (!changed) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

AdmmResult SolveQpAdmm(const QpData& data, const AdmmSettings& settings) {
  const Eigen::Index n = data.q.size();
  const Eigen::Index m = data.lower.size();
  if (data.p.rows() != n || data.p.cols() != n || data.a.cols() != n ||
      data.a.rows() != m || data.upper.size() != m) {
    throw ValidationError("SolveQpAdmm: inconsistent problem dimensions");
  }
  if (!(settings.primal_tol > 0.0) || !(settings.dual_tol > 0.0) ||
      !(settings.relative_tol >= 0.0) || !(settings.rho > 0.0) ||
      !(settings.sigma > 0.0) || !(settings.alpha > 0.0 && settings.alpha < 2.0) ||
      settings.max_iters < 1 || settings.check_interval < 1) {
    throw ValidationError("SolveQpAdmm: invalid settings");
  }
  if ((data.lower.array() > data.upper.array()).any()) {
    throw ValidationError("SolveQpAdmm: lower > upper in constraint bounds");
  }

  if (m == 0) {
    // Unconstrained: minimal-norm stationary point of the quadratic.
    AdmmResult out;
    const Eigen::MatrixXd p_dense = Eigen::MatrixXd(data.p);
    out.x = p_dense.completeOrthogonalDecomposition().solve(-data.q);
    out.y = Eigen::VectorXd::Zero(0);
    out.dual_residual = InfNorm(p_dense * out.x + data.q);
    out.objective = 0.5 * out.x.dot(p_dense * out.x) + data.q.dot(out.x);
    out.converged = out.dual_residual <= settings.dual_tol;
    out.rho = settings.rho;
    return out;
  }

  // Optional row equilibration; the feasible set is unchanged.
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(m);
  Eigen::SparseMatrix<double> a = data.a;
  if (settings.row_scaling) {
    Eigen::VectorXd norms = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < a.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
        norms(it.row()) += it.value() * it.value();
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      row_scale(i) = norms(i) > 0.0 ? 1.0 / std::sqrt(norms(i)) : 1.0;
    }
    a = row_scale.asDiagonal() * a;
  }
  const Eigen::VectorXd lower = row_scale.cwiseProduct(data.lower);
  const Eigen::VectorXd upper = row_scale.cwiseProduct(data.upper);
  const Eigen::SparseMatrix<double> at = a.transpose();

  const Eigen::MatrixXd p_dense = Eigen::MatrixXd(data.p);
  const Eigen::MatrixXd ata = Eigen::MatrixXd(at * a);

  double rho = settings.rho;
  Kkt kkt(p_dense, ata, settings.sigma);
  kkt.Factor(rho);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m).cwiseMax(lower).cwiseMin(upper);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  AdmmResult best;
  double best_score = std::numeric_limits<double>::infinity();
  int refactorizations = 0;

  auto residuals = [&](const Eigen::VectorXd& xv, const Eigen::VectorXd& zv,
                       const Eigen::VectorXd& yv) {
    Residuals r;
    const Eigen::VectorXd ax = a * xv;
    const Eigen::VectorXd px = p_dense * xv;
    const Eigen::VectorXd aty = at * yv;
    r.primal = InfNorm(ax - zv);
    r.dual = InfNorm(px + data.q + aty);
    r.primal_scale = std::max(InfNorm(ax), InfNorm(zv));
    r.dual_scale = std::max({InfNorm(px), InfNorm(aty), InfNorm(data.q)});
    return r;
  };

  AdmmResult out;
  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    const Eigen::VectorXd rhs = settings.sigma * x - data.q + at * (rho * z - y);
    const Eigen::VectorXd x_tilde = kkt.Solve(rhs);
    const Eigen::VectorXd z_tilde = a * x_tilde;
    x = settings.alpha * x_tilde + (1.0 - settings.alpha) * x;
    const Eigen::VectorXd z_relaxed = settings.alpha * z_tilde + (1.0 - settings.alpha) * z;
    const Eigen::VectorXd z_next = (z_relaxed + y / rho).cwiseMax(lower).cwiseMin(upper);
    y += rho * (z_relaxed - z_next);
    z = z_next;

    if (iter % settings.check_interval != 0 && iter != settings.max_iters) continue;

    const Residuals r = residuals(x, z, y);
    const double eps_primal = settings.primal_tol;
    const double eps_dual = settings.dual_tol + settings.relative_tol * r.dual_scale;
    const double score = std::max(r.primal / eps_primal, r.dual / eps_dual);
    if (score < best_score) {
      best_score = score;
      best.x = x;
      best.y = y;
      best.iterations = iter;
      best.primal_residual = r.primal;
      best.dual_residual = r.dual;
    }
    const bool admm_done = r.primal <= eps_primal && r.dual <= eps_dual;
    if (settings.polish && !admm_done && iter % settings.polish_interval == 0 &&
        r.primal <= settings.polish_trigger) {
      if (auto pol = Polish(p_dense, data.q, a, lower, upper, z, y, settings)) {
        out.x = pol->x;
        out.y = pol->y;
        out.iterations = iter;
        out.primal_residual = pol->primal;
        out.dual_residual = pol->dual;
        out.converged = true;
        out.polished = true;
        break;
      }
    }
    if (admm_done) {
      out.x = x;
      out.y = y;
      out.iterations = iter;
      out.primal_residual = r.primal;
      out.dual_residual = r.dual;
      out.converged = true;
      break;
    }
    if (settings.adaptive_rho && r.dual > 0.0) {
      const double ratio = (r.primal / std::max(r.primal_scale, 1e-12)) /
                           (r.dual / std::max(r.dual_scale, 1e-12));
      const double rho_new = std::clamp(rho * std::sqrt(ratio), kRhoMin, kRhoMax);
      if (rho_new > 5.0 * rho || rho_new < 0.2 * rho) {
        rho = rho_new;
        kkt.Factor(rho);
        ++refactorizations;
      }
    }
  }
  if (!out.converged) {
    out = best;
    out.iterations = settings.max_iters;
    out.converged = false;
    if (settings.polish) {
      if (auto pol = Polish(p_dense, data.q, a, lower, upper, z, y, settings)) {
        out.x = pol->x;
        out.y = pol->y;
        out.primal_residual = pol->primal;
        out.dual_residual = pol->dual;
        out.converged = true;
        out.polished = true;
      }
    }
  }
  out.rho = rho;
  out.refactorizations = refactorizations;
  out.objective = 0.5 * out.x.dot(p_dense * out.x) + data.q.dot(out.x);
  // Report multipliers and violation in the caller's row scaling.
  out.y = row_scale.cwiseProduct(out.y);
  if (m > 0) {
    const Eigen::VectorXd ax = data.a * out.x;
    out.max_violation = std::max(0.0, std::max((ax - data.upper).maxCoeff(),
                                               (data.lower - ax).maxCoeff()));
  }
  return out;
}

}  // namespace suplearn
