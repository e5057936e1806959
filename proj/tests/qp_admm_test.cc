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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "test_util.h"

namespace suplearn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::SparseMatrix<double> Sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

// Exhaustive active-set oracle for min 1/2 x'Px + q'x s.t. Ax <= b with P
// positive definite: the optimum is the feasible KKT point with
// nonnegative multipliers among all 2^m active sets.
Eigen::VectorXd EnumerateActiveSets(const Eigen::MatrixXd& p, const Eigen::VectorXd& q,
                                    const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = p.rows(), m = a.rows();
  double best = kInf;
  Eigen::VectorXd best_x;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (mask & (1u << i)) act.push_back(i);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(act.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd rhs(n + k);
    kkt.topLeftCorner(n, n) = p;
    rhs.head(n) = -q;
    for (Eigen::Index r = 0; r < k; ++r) {
      kkt.block(n + r, 0, 1, n) = a.row(act[static_cast<std::size_t>(r)]);
      kkt.block(0, n + r, n, 1) = a.row(act[static_cast<std::size_t>(r)]).transpose();
      rhs(n + r) = b(act[static_cast<std::size_t>(r)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(n);
    if ((sol.tail(k).array() < -1e-10).any()) continue;
    if (((a * x - b).array() > 1e-10).any()) continue;
    const double obj = 0.5 * x.dot(p * x) + q.dot(x);
    if (obj < best) {
      best = obj;
      best_x = x;
    }
  }
  return best_x;
}

TEST(AdmmTest, ScalarWithActiveBound) {
  QpData data;
  data.p = Sparse(Eigen::MatrixXd::Ones(1, 1));
  data.q = Eigen::VectorXd::Constant(1, -1.0);
  data.a = Sparse(Eigen::MatrixXd::Ones(1, 1));
  data.lower = Eigen::VectorXd::Constant(1, -kInf);
  data.upper = Eigen::VectorXd::Constant(1, 0.5);
  const AdmmResult r = SolveQpAdmm(data);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 0.5, 1e-6);
  EXPECT_NEAR(r.y(0), 0.5, 1e-5);
  EXPECT_NEAR(r.objective, 0.125 - 0.5, 1e-6);
  EXPECT_LE(r.max_violation, 1e-6);
}

TEST(AdmmTest, EqualityConstraint) {
  // min x1^2 + x2^2 s.t. x1 + x2 = 1 -> (0.5, 0.5).
  QpData data;
  data.p = Sparse(2.0 * Eigen::MatrixXd::Identity(2, 2));
  data.q = Eigen::VectorXd::Zero(2);
  data.a = Sparse(Eigen::MatrixXd::Ones(1, 2));
  data.lower = Eigen::VectorXd::Ones(1);
  data.upper = Eigen::VectorXd::Ones(1);
  const AdmmResult r = SolveQpAdmm(data);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 0.5, 1e-6);
  EXPECT_NEAR(r.x(1), 0.5, 1e-6);
}

TEST(AdmmTest, NoConstraintsSolvesDirectly) {
  QpData data;
  Eigen::Matrix2d p;
  p << 2.0, 0.5, 0.5, 1.0;
  data.p = Sparse(p);
  data.q = Eigen::Vector2d(1.0, -2.0);
  data.a.resize(0, 2);
  data.lower.resize(0);
  data.upper.resize(0);
  const AdmmResult r = SolveQpAdmm(data);
  EXPECT_TRUE(r.converged);
  const Eigen::Vector2d expected = p.ldlt().solve(-Eigen::Vector2d(1.0, -2.0));
  EXPECT_NEAR((r.x - expected).norm(), 0.0, 1e-12);
}

TEST(AdmmTest, MatchesActiveSetEnumeration) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + trial % 3, m = 5;
    const Eigen::MatrixXd l = testing::RandomMatrix(rng, n, n);
    const Eigen::MatrixXd p = l * l.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd q = testing::RandomGaussian(rng, n, 3.0);
    const Eigen::MatrixXd a = testing::RandomMatrix(rng, m, n);
    const Eigen::VectorXd b = testing::RandomGaussian(rng, m).cwiseAbs();  // 0 is feasible
    QpData data{Sparse(p), q, Sparse(a), Eigen::VectorXd::Constant(m, -kInf), b};
    const AdmmResult r = SolveQpAdmm(data);
    const Eigen::VectorXd oracle = EnumerateActiveSets(p, q, a, b);
    ASSERT_EQ(oracle.size(), n);
    EXPECT_TRUE(r.converged) << "trial " << trial;
    EXPECT_LT((r.x - oracle).cwiseAbs().maxCoeff(), 1e-4) << "trial " << trial;
    EXPECT_LE(r.max_violation, 1e-6);
  }
}

TEST(AdmmTest, DeterministicIterates) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd a = testing::RandomMatrix(rng, 8, 3);
  QpData data{Sparse(Eigen::MatrixXd::Identity(3, 3)), testing::RandomGaussian(rng, 3), Sparse(a),
              Eigen::VectorXd::Constant(8, -kInf), Eigen::VectorXd::Constant(8, 0.1)};
  const AdmmResult r1 = SolveQpAdmm(data);
  const AdmmResult r2 = SolveQpAdmm(data);
  EXPECT_EQ(r1.x, r2.x);
  EXPECT_EQ(r1.y, r2.y);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(AdmmTest, IterationLimitReturnsFlaggedBestIterate) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd a = testing::RandomMatrix(rng, 30, 4);
  QpData data{Sparse(Eigen::MatrixXd::Identity(4, 4)), testing::RandomGaussian(rng, 4, 5.0),
              Sparse(a), Eigen::VectorXd::Constant(30, -kInf), Eigen::VectorXd::Constant(30, 0.1)};
  AdmmSettings s;
  s.max_iters = 3;
  s.check_interval = 1;
  s.polish = false;
  const AdmmResult r = SolveQpAdmm(data, s);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_TRUE(r.x.allFinite());
}

}  // namespace
}  // namespace suplearn
