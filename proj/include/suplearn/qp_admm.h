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

#ifndef SUPLEARN_QP_ADMM_H_
#define SUPLEARN_QP_ADMM_H_

// Operator-splitting (ADMM) solver for convex QPs
//
//   minimize  1/2 x^T P x + q^T x   subject to  lower <= A x <= upper,
//
// in the form popularized by OSQP: each iteration solves one linear system
// with the fixed matrix P + sigma I + rho A^T A (factored densely, so this is
// meant for a few hundred to a few thousand variables but any number of
// sparse constraint rows), projects onto the box, and updates the duals.
// An optional polishing step solves the equality-constrained QP on the
// guessed active set and is accepted only when it passes the KKT check.
// The penalty rho is adapted from the ratio of scaled primal and dual
// residuals, triggering a refactorization when it moves by more than 5x.

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace suplearn {

struct QpData {
  Eigen::SparseMatrix<double> p;  // symmetric PSD, n x n
  Eigen::VectorXd q;
  Eigen::SparseMatrix<double> a;  // m x n
  Eigen::VectorXd lower;          // may contain -inf
  Eigen::VectorXd upper;          // may contain +inf
};

struct AdmmSettings {
  int max_iters = 20000;
  double primal_tol = 1e-6;  // absolute, on |A x - z|_inf
  double dual_tol = 1e-6;    // absolute part of the dual criterion
  double relative_tol = 1e-6;
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;  // over-relaxation
  bool adaptive_rho = true;
  int check_interval = 10;
  // Normalize every constraint row of A to unit Euclidean norm.
  bool row_scaling = false;
  // Active-set polishing, tried every polish_interval iterations once the
  // primal residual is below polish_trigger, and once more at the limit.
  bool polish = true;
  int polish_interval = 500;
  double polish_trigger = 1e-3;
};

struct AdmmResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // constraint multipliers (unscaled)
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;  // 1/2 x^T P x + q^T x
  double max_violation = 0.0;
  double rho = 0.0;
  int refactorizations = 0;
  bool converged = false;
  bool polished = false;
};

AdmmResult SolveQpAdmm(const QpData& data, const AdmmSettings& settings = {});

}  // namespace suplearn

#endif  // SUPLEARN_QP_ADMM_H_
