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

#include "suplearn/geometry.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.h"

namespace suplearn {
namespace {

using testing::RandomCloud;
using testing::RandomUnit;
using testing::UniformDisk;

Eigen::VectorXd V2(double a, double b) { return Eigen::Vector2d(a, b); }

// Brute-force max of inner products, written without Eigen reductions.
double BruteSupport(const PointCloud<double>& cloud, const Eigen::VectorXd& y) {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < cloud.size(); ++j) {
    double dot = 0.0;
    for (Eigen::Index k = 0; k < cloud.dim(); ++k) dot += cloud[j](k) * y(k);
    best = std::max(best, dot);
  }
  return best;
}

SupportFunction<double> Disk(double r) { return BallSupport<double>(Eigen::Vector2d::Zero(), r); }

TEST(DirectionSetTest, RejectsNonUnitColumns) {
  Eigen::MatrixXd m(2, 1);
  m << 1.0, 1.0;
  EXPECT_THROW(DirectionSet<double>{m}, ValidationError);
  EXPECT_THROW(DirectionSet<double>::Normalized(Eigen::MatrixXd::Zero(2, 1)), ValidationError);
  EXPECT_NEAR(DirectionSet<double>::Normalized(m)[0].norm(), 1.0, 1e-15);
}

TEST(SampleUnitDirectionsTest, OneDimensionalDirectionsAreSigns) {
  const auto dirs = SampleUnitDirections<double>(1, 4, 11);
  ASSERT_EQ(dirs.size(), 4);
  for (Eigen::Index i = 0; i < dirs.size(); ++i) {
    EXPECT_EQ(std::abs(dirs[i](0)), 1.0);
  }
}

TEST(SampleUnitDirectionsTest, EmpiricalMeanIsSmall) {
  const auto dirs = SampleUnitDirections<double>(2, 200, 7);
  EXPECT_LT(dirs.matrix().rowwise().mean().norm(), 0.15);
}

TEST(SampleUnitDirectionsTest, SingleDirectionIsUnit) {
  const auto dirs = SampleUnitDirections<double>(3, 1, 5);
  EXPECT_NEAR(dirs[0].norm(), 1.0, 1e-12);
}

TEST(SampleUnitDirectionsTest, DeterministicGivenSeed) {
  EXPECT_EQ(SampleUnitDirections<double>(3, 50, 9).matrix(),
            SampleUnitDirections<double>(3, 50, 9).matrix());
  EXPECT_NE(SampleUnitDirections<double>(3, 50, 9).matrix(),
            SampleUnitDirections<double>(3, 50, 10).matrix());
  EXPECT_THROW(SampleUnitDirections<double>(0, 5, 1), ValidationError);
}

TEST(EmpiricalSupportTest, OriginGivesZero) {
  const PointCloud<double> origin(Eigen::MatrixXd::Zero(2, 1));
  const auto s = EmpiricalSupport(origin, SampleUnitDirections<double>(2, 20, 1));
  EXPECT_EQ(s.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(EmpiricalSupportTest, DiamondAtDiagonal) {
  Eigen::MatrixXd pts(2, 4);
  pts << 1, 0, -1, 0, 0, 1, 0, -1;
  const auto dirs = DirectionSet<double>::Normalized(Eigen::MatrixXd::Ones(2, 1));
  const auto s = EmpiricalSupport(PointCloud<double>(pts), dirs);
  EXPECT_NEAR(s.values(0), std::sqrt(0.5), 1e-15);
}

TEST(EmpiricalSupportTest, DenseDiskSampleApproachesOne) {
  std::mt19937_64 rng(3);
  const PointCloud<double> disk = UniformDisk(rng, 10000);
  const auto s = EmpiricalSupport(disk, SampleUnitDirections<double>(2, 50, 4));
  EXPECT_GE(s.values.minCoeff(), 0.97);
  EXPECT_LE(s.values.maxCoeff(), 1.0);
}

TEST(EmpiricalSupportTest, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + trial % 4;
    const auto cloud = RandomCloud(rng, d, 1 + trial * 3);
    const auto dirs = SampleUnitDirections<double>(d, 30, static_cast<std::uint64_t>(trial));
    const auto s = EmpiricalSupport(cloud, dirs);
    for (Eigen::Index i = 0; i < dirs.size(); ++i) {
      EXPECT_NEAR(s.values(i), BruteSupport(cloud, dirs[i]), 1e-12);
    }
  }
}

TEST(EmpiricalSupportTest, DimensionMismatchThrows) {
  const PointCloud<double> cloud(Eigen::MatrixXd::Zero(3, 2));
  EXPECT_THROW(EmpiricalSupport(cloud, SampleUnitDirections<double>(2, 3, 1)), ValidationError);
}

TEST(EmpiricalSupportTest, AddingPointsNeverDecreasesValues) {
  std::mt19937_64 rng(8);
  const auto dirs = SampleUnitDirections<double>(3, 100, 2);
  Eigen::MatrixXd pts = testing::RandomMatrix(rng, 3, 10);
  Eigen::VectorXd prev = EmpiricalSupport(PointCloud<double>(pts), dirs).values;
  for (int step = 0; step < 10; ++step) {
    pts.conservativeResize(Eigen::NoChange, pts.cols() + 5);
    pts.rightCols(5) = testing::RandomMatrix(rng, 3, 5);
    const Eigen::VectorXd next = EmpiricalSupport(PointCloud<double>(pts), dirs).values;
    EXPECT_TRUE((next.array() >= prev.array()).all());
    prev = next;
  }
}

TEST(EmpiricalSupportTest, HomogeneousExtensionIsSublinear) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const auto cloud = RandomCloud(rng, d, 6);
    // Extension of the sampled values, evaluated through unit directions only.
    const auto h = HomogeneousExtension<double>(d, [&](const Eigen::VectorXd& y) {
      Eigen::MatrixXd col = y;
      return EmpiricalSupport(cloud, DirectionSet<double>(col)).values(0);
    });
    const Eigen::VectorXd y = testing::RandomGaussian(rng, d);
    const Eigen::VectorXd z = testing::RandomGaussian(rng, d);
    const double a = testing::RandomUniform(rng, 0.01, 10.0);
    const double lambda = testing::RandomUniform(rng, 0.0, 1.0);
    EXPECT_NEAR(h(a * y), a * h(y), 1e-9 * (1.0 + std::abs(a * h(y))));
    EXPECT_LE(h(lambda * y + (1 - lambda) * z),
              lambda * h(y) + (1 - lambda) * h(z) + 1e-9);
  }
}

TEST(HausdorffTest, IdenticalArgumentsGiveZero) {
  std::mt19937_64 rng(1);
  const auto h = CloudSupport(RandomCloud(rng, 3, 20));
  EXPECT_EQ(HausdorffDistance(h, h, SphereGrid<double>(20, 10)), 0.0);
}

TEST(HausdorffTest, ConcentricDisks) {
  EXPECT_NEAR(HausdorffDistance(Disk(1), Disk(2), CircleGrid<double>(37)), 1.0, 1e-15);
}

TEST(HausdorffTest, SingletonsOnDenseGrid) {
  const auto a = SingletonSupport<double>(V2(-1, 1));
  const auto b = SingletonSupport<double>(V2(0, 0));
  for (Eigen::Index n : {500, 720, 1000}) {
    EXPECT_NEAR(HausdorffDistance(a, b, CircleGrid<double>(n)), std::sqrt(2.0), 2e-3);
  }
}

TEST(HausdorffTest, SymmetricAndTriangleInequality) {
  std::mt19937_64 rng(5);
  const auto grid = CircleGrid<double>(360);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = CloudSupport(RandomCloud(rng, 2, 5));
    const auto b = CloudSupport(RandomCloud(rng, 2, 7));
    const auto c = CloudSupport(RandomCloud(rng, 2, 3));
    const double ab = HausdorffDistance(a, b, grid);
    EXPECT_EQ(ab, HausdorffDistance(b, a, grid));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(HausdorffDistance(a, c, grid), ab + HausdorffDistance(b, c, grid) + 1e-12);
  }
}

TEST(HausdorffTest, DimensionMismatchThrows) {
  EXPECT_THROW(HausdorffDistance(Disk(1), ZeroSupport<double>(3), CircleGrid<double>(10)),
               ValidationError);
}

TEST(MembershipTest, DiskExamples) {
  const auto grid = CircleGrid<double>(720);
  EXPECT_TRUE(IsMember(Disk(1), V2(0, 0), grid));
  EXPECT_FALSE(IsMember(Disk(1), V2(2, 0), grid));
  EXPECT_TRUE(IsMember(Disk(1), V2(1, 0), grid));
}

TEST(InclusionTest, Examples) {
  const auto grid = CircleGrid<double>(720);
  EXPECT_TRUE(Includes(Disk(1), Disk(1), grid));
  EXPECT_TRUE(Includes(Disk(1), Disk(2), grid));
  EXPECT_FALSE(Includes(Disk(2), Disk(1), grid));
  const auto square = BoxSupport<double>(V2(-1, -1), V2(1, 1));
  EXPECT_FALSE(Includes(square, Disk(1), grid));
  EXPECT_NEAR(square(Eigen::Vector2d(1, 1).normalized()), std::sqrt(2.0), 1e-15);
}

TEST(SetCalculusTest, MinkowskiExamples) {
  const auto grid = CircleGrid<double>(100);
  const auto disk = Disk(1);
  EXPECT_EQ(MinkowskiSum<double>({disk, ZeroSupport<double>(2)}).Evaluate(grid),
            disk.Evaluate(grid));
  const Eigen::VectorXd two = MinkowskiSum<double>({disk, disk}).Evaluate(grid);
  EXPECT_NEAR((two.array() - 2.0).abs().maxCoeff(), 0.0, 1e-15);
  const auto sum = MinkowskiSum<double>(
      {SingletonSupport<double>(V2(1, 2)), SingletonSupport<double>(V2(-3, 0.5))});
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(sum(grid[i]), grid[i].dot(V2(-2, 2.5)), 1e-14);
  }
}

TEST(SetCalculusTest, UnionHullExamples) {
  const auto grid = CircleGrid<double>(100);
  std::mt19937_64 rng(2);
  const auto x = CloudSupport(RandomCloud(rng, 2, 8));
  EXPECT_EQ(UnionHull<double>({x, x}).Evaluate(grid), x.Evaluate(grid));
  const auto pm = UnionHull<double>(
      {SingletonSupport<double>(V2(1, 0)), SingletonSupport<double>(V2(-1, 0))});
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(pm(grid[i]), std::abs(grid[i](0)));
  }
  const Eigen::VectorXd big = UnionHull<double>({Disk(1), Disk(2)}).Evaluate(grid);
  EXPECT_NEAR((big.array() - 2.0).abs().maxCoeff(), 0.0, 1e-15);
}

TEST(SetCalculusTest, PermutationInvariance) {
  std::mt19937_64 rng(4);
  const auto grid = SphereGrid<double>(12, 7);
  std::vector<SupportFunction<double>> hs;
  for (int i = 0; i < 4; ++i) hs.push_back(CloudSupport(RandomCloud(rng, 3, 4)));
  std::vector<SupportFunction<double>> reversed(hs.rbegin(), hs.rend());
  EXPECT_EQ(UnionHull(hs).Evaluate(grid), UnionHull(reversed).Evaluate(grid));
  // Sums of the same terms in a different order may round differently.
  EXPECT_LT((MinkowskiSum(hs).Evaluate(grid) - MinkowskiSum(reversed).Evaluate(grid))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(SetCalculusTest, AffineImageExamples) {
  const auto grid = CircleGrid<double>(90);
  std::mt19937_64 rng(6);
  const auto x = CloudSupport(RandomCloud(rng, 2, 9));
  EXPECT_EQ(AffineImage<double>(x, Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero())
                .Evaluate(grid),
            x.Evaluate(grid));
  const Eigen::VectorXd doubled =
      AffineImage<double>(Disk(1), 2.0 * Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero())
          .Evaluate(grid);
  EXPECT_NEAR((doubled.array() - 2.0).abs().maxCoeff(), 0.0, 1e-14);
  const auto shifted = AffineImage<double>(Disk(1), Eigen::Matrix2d::Identity(), V2(3, 0));
  EXPECT_DOUBLE_EQ(shifted(V2(1, 0)), 4.0);
  EXPECT_THROW(AffineImage<double>(Disk(1), Eigen::MatrixXd::Identity(2, 3), V2(0, 0)),
               ValidationError);
}

TEST(SetCalculusTest, AffineImageMatchesTransformedCloud) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = RandomCloud(rng, 3, 10);
    const Eigen::MatrixXd a = testing::RandomMatrix(rng, 3, 3);
    const Eigen::VectorXd b = testing::RandomGaussian(rng, 3);
    const Eigen::MatrixXd moved = (a * cloud.matrix()).colwise() + b;
    const auto image = AffineImage<double>(CloudSupport(cloud), a, b);
    const auto direct = CloudSupport(PointCloud<double>(moved));
    const Eigen::VectorXd y = RandomUnit(rng, 3);
    EXPECT_NEAR(image(y), direct(y), 1e-12);
  }
}

TEST(SupportFunctionTest, AnalyticSupportsArePositivelyHomogeneous) {
  std::mt19937_64 rng(17);
  const std::vector<SupportFunction<double>> hs = {
      BallSupport<double>(V2(0.5, -1), 2.0), BoxSupport<double>(V2(-1, 0), V2(2, 3)),
      CloudSupport(RandomCloud(rng, 2, 6)), SingletonSupport<double>(V2(3, 1))};
  for (const auto& h : hs) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd z = testing::RandomGaussian(rng, 2);
      const double a = testing::RandomUniform(rng, 1e-3, 10.0);
      EXPECT_NEAR(h(a * z), a * h(z), 1e-9 * (1.0 + std::abs(a * h(z))));
    }
  }
}

TEST(SupportFunctionTest, HomogeneousExtensionOfSphereValues) {
  const auto h = HomogeneousExtension<double>(2, [](const Eigen::VectorXd&) { return 1.5; });
  EXPECT_DOUBLE_EQ(h(V2(3, 4)), 7.5);
  EXPECT_EQ(h(V2(0, 0)), 0.0);
  EXPECT_THROW(h(Eigen::Vector3d(1, 0, 0)), ValidationError);
}

TEST(ProjectionTest, Examples) {
  std::mt19937_64 rng(19);
  const auto cloud4 = RandomCloud(rng, 4, 30);
  const auto proj = ProjectCloud(cloud4, {0, 1});
  EXPECT_EQ(proj.dim(), 2);
  EXPECT_EQ(proj.size(), 30);

  const PointCloud<double> one(Eigen::Vector3d(1, 2, 3));
  const auto kept = ProjectCloud(one, {0, 2});
  EXPECT_EQ(kept[0], V2(1, 3));

  Eigen::MatrixXd y2(2, 1), y4 = Eigen::MatrixXd::Zero(4, 1);
  y2 << 1, 0;
  y4(0, 0) = 1;
  EXPECT_EQ(EmpiricalSupport(proj, DirectionSet<double>(y2)).values(0),
            EmpiricalSupport(cloud4, DirectionSet<double>(y4)).values(0));
  EXPECT_THROW(ProjectCloud(cloud4, {0, 4}), ValidationError);
  EXPECT_THROW(ProjectCloud(cloud4, {}), ValidationError);
}

TEST(GridTest, CircleGridCoversHalfOpenInterval) {
  const auto angles = CircleGridAngles(720);
  ASSERT_EQ(angles.size(), 720u);
  EXPECT_GT(angles.front(), -std::numbers::pi);
  EXPECT_DOUBLE_EQ(angles.back(), std::numbers::pi);
  const auto grid = CircleGrid<double>(720);
  EXPECT_NEAR(grid[0](0), std::cos(angles[0]), 1e-15);
  EXPECT_NEAR(grid[0](1), std::sin(angles[0]), 1e-15);
}

TEST(GridTest, DefaultGrids) {
  EXPECT_EQ(DefaultGrid<double>(2).size(), 720);
  EXPECT_EQ(DefaultGrid<double>(3).size(), 5000);
  const auto sphere = SphereGrid<double>(100, 50);
  EXPECT_NEAR(sphere[0](2), -1.0, 1e-15);
  EXPECT_NEAR(sphere[49](2), 1.0, 1e-15);
  EXPECT_EQ(DefaultGrid<double>(5, 40).size(), 40);
}

}  // namespace
}  // namespace suplearn
