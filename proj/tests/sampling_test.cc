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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "suplearn/errors.h"

namespace suplearn {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::VectorXd Const(Eigen::Index n, double v) { return Eigen::VectorXd::Constant(n, v); }

TEST(HyperrectangleTest, Validation) {
  EXPECT_THROW(Hyperrectangle(Const(2, 1.0), Const(2, 1.0)), ValidationError);
  EXPECT_THROW(Hyperrectangle(Const(2, 0.0), Const(3, 1.0)), ValidationError);
  const Hyperrectangle box(Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 2));
  EXPECT_EQ(box.center(), Eigen::VectorXd(Eigen::Vector2d(0, 1)));
  EXPECT_TRUE(box.Contains(Eigen::Vector2d(1, 0)));
  EXPECT_FALSE(box.Contains(Eigen::Vector2d(1.0000001, 0)));
}

TEST(GramMatrixTest, SinglePoint) {
  EXPECT_EQ(GramMatrix(Const(1, 0.3), 0.7), Eigen::MatrixXd::Ones(1, 1));
}

TEST(GramMatrixTest, KernelValueAtScaledSeparation) {
  const double l = 0.7;
  const Eigen::Vector2d grid(0.0, l * std::sqrt(2.0));
  const Eigen::MatrixXd g = GramMatrix(grid, l);
  EXPECT_NEAR(g(0, 1), std::exp(-1.0), 1e-15);
  EXPECT_EQ(g(0, 1), g(1, 0));
  EXPECT_EQ(g.diagonal(), Eigen::VectorXd::Ones(2));
}

TEST(GramMatrixTest, LongLengthScaleGivesOnes) {
  const Eigen::MatrixXd g = GramMatrix(UniformTimeGrid(2.0, 11), 1e8);
  EXPECT_NEAR((g.array() - 1.0).abs().maxCoeff(), 0.0, 1e-15);
}

TEST(GramMatrixTest, StationaryOnUniformGrid) {
  const Eigen::MatrixXd g = GramMatrix(UniformTimeGrid(2.0, 101), 0.7);
  for (Eigen::Index i = 0; i + 1 < g.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < g.cols(); ++j) {
      ASSERT_NEAR(g(i, j), g(i + 1, j + 1), 1e-15);
    }
  }
}

TEST(GramMatrixTest, RejectsBadInput) {
  EXPECT_THROW(GramMatrix(Eigen::Vector2d(1.0, 1.0), 0.7), ValidationError);
  EXPECT_THROW(GramMatrix(Eigen::Vector2d(0.0, 1.0), 0.0), ValidationError);
}

TEST(JitteredCholeskyTest, FactorsJitteredGram) {
  const Eigen::MatrixXd g = GramMatrix(UniformTimeGrid(2.0, 101), 0.7);
  const Eigen::MatrixXd l = JitteredCholesky(g);
  Eigen::MatrixXd jittered = g;
  jittered.diagonal().array() += kGramJitter;
  EXPECT_LT((l * l.transpose() - jittered).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JitteredCholeskyTest, IndefiniteMatrixReportsDiagnostics) {
  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  try {
    JitteredCholesky(bad);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("min eigenvalue"), std::string::npos);
  }
}

TEST(TruncatedMvnTest, HardTruncationOneDimension) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Eigen::VectorXd x =
        SampleTruncatedMvnGibbs(Const(1, 0.0), Eigen::MatrixXd::Ones(1, 1), Const(1, -1.0),
                                Const(1, 1.0), {}, seed);
    ASSERT_GE(x(0), -1.0);
    ASSERT_LE(x(0), 1.0);
  }
}

TEST(TruncatedMvnTest, WideBoundsRecoverStandardNormal) {
  GibbsOptions opts;
  opts.sweeps_between_samples = 1;
  const Eigen::MatrixXd chain = SampleTruncatedMvnChain(
      Const(1, 0.0), Eigen::MatrixXd::Ones(1, 1), Const(1, -1e6), Const(1, 1e6), opts, 10000, 5);
  const double mean = chain.mean();
  const double var = (chain.array() - mean).square().mean();
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(var, 1.0, 0.1);
}

TEST(TruncatedMvnTest, HalfNormalMeans) {
  GibbsOptions opts;
  opts.sweeps_between_samples = 1;
  const Eigen::MatrixXd chain = SampleTruncatedMvnChain(
      Const(2, 0.0), Eigen::MatrixXd::Identity(2, 2), Const(2, 0.0), Const(2, 1e8), opts, 10000, 6);
  EXPECT_GE(chain.minCoeff(), 0.0);
  const double half_normal_mean = std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(chain.row(0).mean(), half_normal_mean, 0.02);
  EXPECT_NEAR(chain.row(1).mean(), half_normal_mean, 0.02);
}

TEST(TruncatedMvnTest, CorrelatedBoxIsRespectedExactly) {
  const Eigen::MatrixXd g = GramMatrix(UniformTimeGrid(2.0, 41), 0.7);
  const Eigen::VectorXd lo = Const(41, -0.2), hi = Const(41, 0.5);
  const Eigen::MatrixXd chain = SampleTruncatedMvnChain(Const(41, 0.15), g, lo, hi, {}, 200, 7);
  EXPECT_GE(chain.minCoeff(), -0.2);
  EXPECT_LE(chain.maxCoeff(), 0.5);
}

TEST(TruncatedMvnTest, Deterministic) {
  const Eigen::MatrixXd g = GramMatrix(UniformTimeGrid(1.0, 10), 0.7);
  EXPECT_EQ(SampleTruncatedMvnGibbs(Const(10, 0.0), g, Const(10, -1), Const(10, 1), {}, 3),
            SampleTruncatedMvnGibbs(Const(10, 0.0), g, Const(10, -1), Const(10, 1), {}, 3));
}

TEST(TruncatedMvnTest, RejectsInvertedBounds) {
  EXPECT_THROW(SampleTruncatedMvnGibbs(Const(1, 0.0), Eigen::MatrixXd::Ones(1, 1), Const(1, 1.0),
                                       Const(1, -1.0), {}, 0),
               ValidationError);
}

GpConfig DubinsGp() {
  GpConfig cfg;
  cfg.length_scale = 0.7;
  cfg.time_grid = UniformTimeGrid(2.0, 101);
  return cfg;
}

TEST(ConstrainedGpTest, DegenerateWidthPinsToCenter) {
  const double eps = 1e-6;
  const Hyperrectangle box(Const(1, 0.3 - eps), Const(1, 0.3 + eps));
  const InputPathEnsemble ens = SampleConstrainedGpPaths(DubinsGp(), box, 5, 1);
  for (const auto& p : ens.paths) {
    EXPECT_LE((p.array() - 0.3).abs().maxCoeff(), eps);
  }
}

TEST(ConstrainedGpTest, DubinsBoundsHoldForEveryValue) {
  const Hyperrectangle box(Const(1, -30 * kDeg), Const(1, 90 * kDeg));
  const InputPathEnsemble ens = SampleConstrainedGpPaths(DubinsGp(), box, 500, 2);
  ASSERT_EQ(ens.num_paths(), 500);
  for (const auto& p : ens.paths) {
    ASSERT_EQ(p.rows(), 101);
    ASSERT_GE(p.minCoeff(), -30 * kDeg);
    ASSERT_LE(p.maxCoeff(), 90 * kDeg);
  }
}

TEST(ConstrainedGpTest, BicycleChannelsInTheirBounds) {
  const Hyperrectangle box(Eigen::Vector2d(-1.0, -10 * kDeg), Eigen::Vector2d(1.0, 10 * kDeg));
  const InputPathEnsemble ens = SampleConstrainedGpPaths(DubinsGp(), box, 100, 3);
  for (const auto& p : ens.paths) {
    ASSERT_EQ(p.cols(), 2);
    EXPECT_GE(p.col(0).minCoeff(), -1.0);
    EXPECT_LE(p.col(0).maxCoeff(), 1.0);
    EXPECT_GE(p.col(1).minCoeff(), -0.17453292519943295);
    EXPECT_LE(p.col(1).maxCoeff(), 0.17453292519943295);
  }
}

TEST(ConstrainedGpTest, PathsAreSmoothAndVaried) {
  const Hyperrectangle box(Const(1, -1.0), Const(1, 1.0));
  const InputPathEnsemble ens = SampleConstrainedGpPaths(DubinsGp(), box, 50, 4);
  double spread = 0.0;
  for (const auto& p : ens.paths) {
    // Step-to-step changes are small relative to the box for l = 0.7, dt = 0.02.
    const Eigen::VectorXd diff = p.col(0).tail(100) - p.col(0).head(100);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 0.25);
    spread += std::abs(p(0, 0) - ens.paths[0](0, 0));
  }
  EXPECT_GT(spread, 1.0);
}

TEST(ConstrainedGpTest, BitIdenticalForSameSeed) {
  const Hyperrectangle box(Eigen::Vector2d(-1.0, -0.2), Eigen::Vector2d(1.0, 0.3));
  const InputPathEnsemble a = SampleConstrainedGpPaths(DubinsGp(), box, 20, 8);
  const InputPathEnsemble b = SampleConstrainedGpPaths(DubinsGp(), box, 20, 8);
  const InputPathEnsemble c = SampleConstrainedGpPaths(DubinsGp(), box, 20, 9);
  for (std::size_t p = 0; p < 20; ++p) EXPECT_EQ(a.paths[p], b.paths[p]);
  EXPECT_NE(a.paths[0], c.paths[0]);
}

TEST(ConstrainedGpTest, PathPrefixIndependentOfCount) {
  // Each path owns its stream, so a larger ensemble extends a smaller one.
  const Hyperrectangle box(Const(1, -1.0), Const(1, 1.0));
  const InputPathEnsemble small = SampleConstrainedGpPaths(DubinsGp(), box, 5, 10);
  const InputPathEnsemble large = SampleConstrainedGpPaths(DubinsGp(), box, 12, 10);
  for (std::size_t p = 0; p < 5; ++p) EXPECT_EQ(small.paths[p], large.paths[p]);
}

TEST(UniformTimeGridTest, Endpoints) {
  const Eigen::VectorXd t = UniformTimeGrid(2.0, 101);
  EXPECT_EQ(t(0), 0.0);
  EXPECT_EQ(t(100), 2.0);
  EXPECT_THROW(UniformTimeGrid(0.0, 10), ValidationError);
}

}  // namespace
}  // namespace suplearn
