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

#include "suplearn/regress_qp.h"

#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>

#include "suplearn/errors.h"

namespace suplearn {

namespace {

using Triplet = Eigen::Triplet<double>;

void CheckDistinct(const DirectionSet<double>& dirs) {
  for (Eigen::Index i = 0; i < dirs.size(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if ((dirs[i] - dirs[j]).norm() <= 1e-12) {
        throw ValidationError("AssembleQp: duplicate directions at indices " +
                              std::to_string(j) + " and " + std::to_string(i));
      }
    }
  }
}

}  // namespace

std::string ToString(FitMode mode) {
  return mode == FitMode::kConvex ? "convex" : "sublinear";
}

FitMode FitModeFromString(const std::string& name) {
  if (name == "convex") return FitMode::kConvex;
  if (name == "sublinear") return FitMode::kSublinear;
  throw ValidationError("unknown fit mode '" + name + "' (expected convex|sublinear)");
}

void QpSolveOptions::Validate() const {
  if (max_iters < 1 || !(primal_tol > 0.0) || !(dual_tol > 0.0) || !(rho > 0.0) ||
      !(sigma > 0.0) || !(alpha > 0.0 && alpha < 2.0)) {
    throw ValidationError("QpSolveOptions: invalid solver options");
  }
}

QpProblem AssembleQp(const SupportSamples<double>& samples, FitMode mode) {
  CheckDimension(samples.directions.size(), samples.values.size(), "AssembleQp");
  CheckDistinct(samples.directions);
  const Eigen::Index n = samples.size();
  const Eigen::Index d = samples.dim();
  const DirectionSet<double>& y = samples.directions;

  QpProblem problem;
  problem.samples = samples;
  problem.mode = mode;
  if (n < d + 1) {
    problem.warnings.push_back("only " + std::to_string(n) + " samples in dimension " +
                               std::to_string(d) + "; at least d + 1 recommended");
  }

  const Eigen::Index g_offset = (mode == FitMode::kConvex) ? n : 0;
  const Eigen::Index num_vars = g_offset + n * d;
  const Eigen::Index num_rows = n * (n - 1);
  const double weight = 2.0 / static_cast<double>(n);

  // Objective as 1/2 x^T P x + q^T x, dropping the constant (1/n)|h_hat|^2.
  std::vector<Triplet> p_entries;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(num_vars);
  if (mode == FitMode::kConvex) {
    for (Eigen::Index i = 0; i < n; ++i) {
      p_entries.emplace_back(i, i, weight);
      q(i) = -weight * samples.values(i);
    }
  } else {
    // Residual h_hat_i - <g_i, y_i>: block i of P is weight * y_i y_i^T.
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
          p_entries.emplace_back(i * d + r, i * d + c, weight * y[i](r) * y[i](c));
        }
        q(i * d + r) = -weight * samples.values(i) * y[i](r);
      }
    }
  }

  std::vector<Triplet> a_entries;
  a_entries.reserve(static_cast<std::size_t>(num_rows * (mode == FitMode::kConvex ? d + 2 : 2 * d)));
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (mode == FitMode::kConvex) {
        // h_i - h_j + <g_i, y_j - y_i> <= 0
        a_entries.emplace_back(row, i, 1.0);
        a_entries.emplace_back(row, j, -1.0);
        for (Eigen::Index k = 0; k < d; ++k) {
          a_entries.emplace_back(row, g_offset + i * d + k, y[j](k) - y[i](k));
        }
      } else {
        // <g_i, y_j> - <g_j, y_j> <= 0
        for (Eigen::Index k = 0; k < d; ++k) {
          a_entries.emplace_back(row, i * d + k, y[j](k));
          a_entries.emplace_back(row, j * d + k, -y[j](k));
        }
      }
      ++row;
    }
  }

  problem.qp.p.resize(num_vars, num_vars);
  problem.qp.p.setFromTriplets(p_entries.begin(), p_entries.end());
  problem.qp.q = std::move(q);
  problem.qp.a.resize(num_rows, num_vars);
  problem.qp.a.setFromTriplets(a_entries.begin(), a_entries.end());
  problem.qp.lower =
      Eigen::VectorXd::Constant(num_rows, -std::numeric_limits<double>::infinity());
  problem.qp.upper = Eigen::VectorXd::Zero(num_rows);
  return problem;
}

MaxAffineModel SolveQp(const QpProblem& problem, const QpSolveOptions& opts) {
  opts.Validate();
  AdmmSettings settings;
  settings.max_iters = opts.max_iters;
  settings.primal_tol = opts.primal_tol;
  settings.dual_tol = opts.dual_tol;
  settings.relative_tol = opts.dual_tol;
  settings.rho = opts.rho;
  settings.sigma = opts.sigma;
  settings.alpha = opts.alpha;
  settings.adaptive_rho = opts.adaptive_rho;
  settings.row_scaling = opts.row_scaling;
  settings.polish = opts.polish;
  const AdmmResult result = SolveQpAdmm(problem.qp, settings);

  const Eigen::Index n = problem.samples.size();
  const Eigen::Index d = problem.dim();
  const Eigen::Index g_offset = (problem.mode == FitMode::kConvex) ? n : 0;

  MaxAffineModel model;
  model.mode = problem.mode;
  model.anchors = problem.samples.directions;
  model.subgradients.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    model.subgradients.row(i) = result.x.segment(g_offset + i * d, d).transpose();
  }
  if (problem.mode == FitMode::kConvex) {
    model.values = result.x.head(n);
  } else {
    model.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      model.values(i) = model.subgradients.row(i).dot(model.anchors[i]);
    }
  }
  if (!model.values.allFinite() || !model.subgradients.allFinite()) {
    throw NumericalError("SolveQp: non-finite solution");
  }
  model.diagnostics.solver_violation = MaxConstraintViolation(model);
  if (opts.repair) model = RepairFeasibility(model);
  model.diagnostics.iterations = result.iterations;
  model.diagnostics.primal_residual = result.primal_residual;
  model.diagnostics.dual_residual = result.dual_residual;
  model.diagnostics.objective =
      (problem.samples.values - model.values).squaredNorm() / static_cast<double>(n);
  model.diagnostics.max_violation = MaxConstraintViolation(model);
  model.diagnostics.converged = result.converged;
  model.diagnostics.polished = result.polished;
  return model;
}

double MaxConstraintViolation(const MaxAffineModel& model) {
  const Eigen::Index n = model.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto g = model.subgradients.row(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gap =
          model.values(i) + g.dot(model.anchors[j] - model.anchors[i]) - model.values(j);
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

MaxAffineModel RepairFeasibility(const MaxAffineModel& model) {
  const Eigen::Index n = model.size();
  MaxAffineModel out = model;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto y = model.anchors[j];
    Eigen::Index arg = j;
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = model.subgradients.row(i).dot(y);
      if (model.mode == FitMode::kConvex) {
        v += model.values(i) - model.subgradients.row(i).dot(model.anchors[i]);
      }
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    out.subgradients.row(j) = model.subgradients.row(arg);
    out.values(j) = (model.mode == FitMode::kSublinear)
                        ? out.subgradients.row(j).dot(y)
                        : best;
  }
  return out;
}

SupportFunction<double> AsSupportFunction(const MaxAffineModel& model) {
  return SupportFunction<double>(
      model.dim(), [model](const Eigen::VectorXd& z) { return EvaluateMaxAffine(model, z); });
}

MaxAffineModel FitSupportQp(const SupportSamples<double>& samples, FitMode mode,
                            const QpSolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  MaxAffineModel model = SolveQp(AssembleQp(samples, mode), opts);
  model.diagnostics.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

}  // namespace suplearn
