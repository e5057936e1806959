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

#ifndef SUPLEARN_REGRESS_QP_H_
#define SUPLEARN_REGRESS_QP_H_

// QP-LP sublinear regression.
//
// Given samples (y_i, h_hat_i), fit values h_i and subgradients g_i by
//
//   minimize (1/n) sum_i (h_hat_i - h_i)^2
//   s.t.     h_j >= h_i + <g_i, y_j - y_i>   for all i != j,
//
// and evaluate the estimate as a pointwise max of affine pieces. In sublinear
// mode the anchors h_i = <g_i, y_i> are imposed by eliminating h, which turns
// the constraints into <g_i, y_j> <= <g_j, y_j> and the estimator into the
// support function max_i <g_i, z> of conv{g_i}.

#include <Eigen/Core>
#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "suplearn/geometry.h"
#include "suplearn/qp_admm.h"

namespace suplearn {

enum class FitMode { kConvex, kSublinear };

std::string ToString(FitMode mode);
FitMode FitModeFromString(const std::string& name);

struct QpProblem {
  SupportSamples<double> samples;
  FitMode mode = FitMode::kSublinear;
  QpData qp;
  // Non-fatal remarks, e.g. fewer samples than d + 1.
  std::vector<std::string> warnings;

  Eigen::Index dim() const { return samples.dim(); }
  Eigen::Index num_variables() const { return qp.q.size(); }
  Eigen::Index num_constraints() const { return qp.lower.size(); }
};

struct QpSolveOptions {
  int max_iters = 20000;
  double primal_tol = 1e-6;
  double dual_tol = 1e-6;
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;
  bool adaptive_rho = true;
  bool row_scaling = false;
  bool polish = true;
  // Replace every anchor's piece by the piece that attains the model's max
  // there. The result satisfies every pairwise constraint exactly (up to
  // rounding) and moves each h_i by at most the solver's violation.
  bool repair = true;

  void Validate() const;
};

struct QpDiagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  // (1/n) sum (h_hat_i - h_i)^2 at the returned iterate.
  double objective = 0.0;
  // Largest violation of h_j >= h_i + <g_i, y_j - y_i> by the returned model.
  double max_violation = 0.0;
  // The same measure at the raw solver iterate, before repair.
  double solver_violation = 0.0;
  bool converged = false;
  bool polished = false;
  double seconds = 0.0;
};

struct MaxAffineModel {
  FitMode mode = FitMode::kSublinear;
  DirectionSet<double> anchors;
  Eigen::VectorXd values;        // h_i
  Eigen::MatrixXd subgradients;  // n x d, row i = g_i
  QpDiagnostics diagnostics;

  Eigen::Index dim() const { return anchors.dim(); }
  Eigen::Index size() const { return values.size(); }
};

// Builds the QP. Throws ValidationError on duplicate directions.
QpProblem AssembleQp(const SupportSamples<double>& samples, FitMode mode);

// Returns the converged solution, or the best iterate with
// diagnostics.converged == false when the iteration limit is hit.
MaxAffineModel SolveQp(const QpProblem& problem, const QpSolveOptions& opts = {});

// Convex mode: max_i h_i + <g_i, z - y_i>; sublinear mode: max_i <g_i, z>.
template <typename Derived>
double EvaluateMaxAffine(const MaxAffineModel& model,
                         const Eigen::MatrixBase<Derived>& z) {
  CheckDimension(model.dim(), z.size(), "EvaluateMaxAffine");
  const Eigen::VectorXd zv = z.template cast<double>();
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < model.size(); ++i) {
    double v = model.subgradients.row(i).dot(zv);
    if (model.mode == FitMode::kConvex) {
      v += model.values(i) - model.subgradients.row(i).dot(model.anchors[i]);
    }
    best = std::max(best, v);
  }
  return best;
}

SupportFunction<double> AsSupportFunction(const MaxAffineModel& model);

// max over ordered pairs (i, j) of h_i + <g_i, y_j - y_i> - h_j, or 0.
double MaxConstraintViolation(const MaxAffineModel& model);

// See QpSolveOptions::repair.
MaxAffineModel RepairFeasibility(const MaxAffineModel& model);

// Assemble + solve, with wall-clock time recorded in the diagnostics.
MaxAffineModel FitSupportQp(const SupportSamples<double>& samples,
                            FitMode mode = FitMode::kSublinear,
                            const QpSolveOptions& opts = {});

}  // namespace suplearn

#endif  // SUPLEARN_REGRESS_QP_H_
