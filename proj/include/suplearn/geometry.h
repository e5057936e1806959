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

#ifndef SUPLEARN_GEOMETRY_H_
#define SUPLEARN_GEOMETRY_H_

// Support functions of compact sets in R^d and the set calculus they carry.
//
// A support function h_X(y) = sup_{x in X} <y, x> is sublinear: convex and
// positively homogeneous of degree one. Every SupportFunction in this library
// accepts arbitrary (not necessarily unit) vectors; representations that are
// only known on the sphere are extended by h(z) = |z| h(z / |z|).
//
// Sphere suprema (Hausdorff distance, inclusion, membership) are taken over an
// explicit DirectionSet, so they are lower bounds / one-sided certificates of
// the continuous quantities.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "suplearn/errors.h"

namespace suplearn {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Absolute tolerance for comparisons of O(1) support values.
inline constexpr double kSupportTolerance = 1e-9;
// Allowed deviation of a direction from unit norm.
inline constexpr double kUnitNormTolerance = 1e-12;

inline void CheckDimension(Eigen::Index expected, Eigen::Index actual,
                           const char* what) {
  if (expected != actual) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" +
                          std::to_string(expected) + " vs " +
                          std::to_string(actual) + ")");
  }
}

// Ordered list of unit vectors in R^d, stored as the columns of a d x n
// matrix.
template <typename Scalar>
class DirectionSet {
 public:
  DirectionSet() = default;

  // Columns must already be unit vectors.
  explicit DirectionSet(MatrixX<Scalar> directions)
      : directions_(std::move(directions)) {
    if (directions_.rows() < 1 || directions_.cols() < 1) {
      throw ValidationError("DirectionSet: must be nonempty");
    }
    for (Eigen::Index i = 0; i < directions_.cols(); ++i) {
      const Scalar norm = directions_.col(i).norm();
      if (!(std::abs(norm - Scalar(1)) <= Scalar(kUnitNormTolerance))) {
        throw ValidationError("DirectionSet: column " + std::to_string(i) +
                              " is not a unit vector");
      }
    }
  }

  // Normalizes every column; zero columns are rejected.
  static DirectionSet Normalized(MatrixX<Scalar> vectors) {
    for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
      const Scalar norm = vectors.col(i).norm();
      if (!(norm > Scalar(0))) {
        throw ValidationError("DirectionSet: zero direction at column " +
                              std::to_string(i));
      }
      vectors.col(i) /= norm;
    }
    return DirectionSet(std::move(vectors));
  }

  Eigen::Index dim() const { return directions_.rows(); }
  Eigen::Index size() const { return directions_.cols(); }
  auto operator[](Eigen::Index i) const { return directions_.col(i); }
  const MatrixX<Scalar>& matrix() const { return directions_; }

 private:
  MatrixX<Scalar> directions_;
};

// Finite point set in R^d, one point per column.
template <typename Scalar>
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(MatrixX<Scalar> points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
      throw ValidationError("PointCloud: must be nonempty");
    }
  }

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }
  auto operator[](Eigen::Index i) const { return points_.col(i); }
  const MatrixX<Scalar>& matrix() const { return points_; }

 private:
  MatrixX<Scalar> points_;
};

// Paired training data (y_i, h_hat(y_i)).
template <typename Scalar>
struct SupportSamples {
  DirectionSet<Scalar> directions;
  VectorX<Scalar> values;

  SupportSamples() = default;
  SupportSamples(DirectionSet<Scalar> dirs, VectorX<Scalar> vals)
      : directions(std::move(dirs)), values(std::move(vals)) {
    CheckDimension(directions.size(), values.size(), "SupportSamples");
    if (!values.allFinite()) {
      throw ValidationError("SupportSamples: non-finite support value");
    }
  }

  Eigen::Index dim() const { return directions.dim(); }
  Eigen::Index size() const { return values.size(); }
};

// Type-erased support function. Evaluation accepts any vector of the
// function's dimension.
template <typename Scalar>
class SupportFunction {
 public:
  using Vector = VectorX<Scalar>;
  using Evaluator = std::function<Scalar(const Vector&)>;

  SupportFunction() = default;
  SupportFunction(Eigen::Index dim, Evaluator evaluator)
      : dim_(dim), evaluator_(std::move(evaluator)) {}

  Eigen::Index dim() const { return dim_; }

  Scalar operator()(const Vector& z) const {
    CheckDimension(dim_, z.size(), "SupportFunction");
    return evaluator_(z);
  }

  // Values at every direction of `grid`.
  Vector Evaluate(const DirectionSet<Scalar>& grid) const {
    CheckDimension(dim_, grid.dim(), "SupportFunction::Evaluate");
    Vector out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      out(i) = evaluator_(grid[i]);
    }
    return out;
  }

 private:
  Eigen::Index dim_ = 0;
  Evaluator evaluator_;
};

// Extends a function known on the unit sphere to R^d by positive homogeneity.
// The origin maps to zero.
template <typename Scalar>
SupportFunction<Scalar> HomogeneousExtension(
    Eigen::Index dim, std::function<Scalar(const VectorX<Scalar>&)> on_sphere) {
  return SupportFunction<Scalar>(
      dim, [f = std::move(on_sphere)](const VectorX<Scalar>& z) {
        const Scalar norm = z.norm();
        if (norm == Scalar(0)) return Scalar(0);
        return norm * f(z / norm);
      });
}

// Analytic support functions.

template <typename Scalar>
SupportFunction<Scalar> ZeroSupport(Eigen::Index dim) {
  return SupportFunction<Scalar>(dim,
                                 [](const VectorX<Scalar>&) { return Scalar(0); });
}

template <typename Scalar>
SupportFunction<Scalar> SingletonSupport(VectorX<Scalar> point) {
  const Eigen::Index dim = point.size();
  return SupportFunction<Scalar>(
      dim, [p = std::move(point)](const VectorX<Scalar>& z) { return z.dot(p); });
}

// Euclidean ball: <z, c> + r |z|.
template <typename Scalar>
SupportFunction<Scalar> BallSupport(VectorX<Scalar> center, Scalar radius) {
  const Eigen::Index dim = center.size();
  return SupportFunction<Scalar>(
      dim, [c = std::move(center), radius](const VectorX<Scalar>& z) {
        return z.dot(c) + radius * z.norm();
      });
}

// Axis-aligned box [lower, upper].
template <typename Scalar>
SupportFunction<Scalar> BoxSupport(VectorX<Scalar> lower, VectorX<Scalar> upper) {
  CheckDimension(lower.size(), upper.size(), "BoxSupport");
  const Eigen::Index dim = lower.size();
  return SupportFunction<Scalar>(
      dim, [lo = std::move(lower), hi = std::move(upper)](const VectorX<Scalar>& z) {
        return z.cwiseProduct(lo).cwiseMax(z.cwiseProduct(hi)).sum();
      });
}

// Support function of the convex hull of a point cloud, evaluated natively.
template <typename Scalar>
SupportFunction<Scalar> CloudSupport(PointCloud<Scalar> cloud) {
  const Eigen::Index dim = cloud.dim();
  return SupportFunction<Scalar>(
      dim, [c = std::move(cloud)](const VectorX<Scalar>& z) {
        return (z.transpose() * c.matrix()).maxCoeff();
      });
}

// n i.i.d. directions uniform on S^{d-1}: normalized standard-normal draws.
template <typename Scalar = double>
DirectionSet<Scalar> SampleUnitDirections(Eigen::Index dim, Eigen::Index count,
                                          std::uint64_t seed) {
  if (dim < 1 || count < 1) {
    throw ValidationError("SampleUnitDirections: need dim >= 1 and count >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixX<Scalar> out(dim, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    VectorX<double> v(dim);
    double norm = 0.0;
    do {
      for (Eigen::Index k = 0; k < dim; ++k) v(k) = normal(rng);
      norm = v.norm();
    } while (norm == 0.0);
    out.col(i) = (v / norm).template cast<Scalar>();
  }
  return DirectionSet<Scalar>(std::move(out));
}

// n equispaced directions on S^1 at angles theta_k = -pi + 2 pi (k+1) / n,
// covering (-pi, pi].
template <typename Scalar = double>
DirectionSet<Scalar> CircleGrid(Eigen::Index count) {
  if (count < 1) throw ValidationError("CircleGrid: count must be >= 1");
  MatrixX<Scalar> out(2, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const double theta = -std::numbers::pi + 2.0 * std::numbers::pi *
                                                 static_cast<double>(k + 1) /
                                                 static_cast<double>(count);
    out(0, k) = Scalar(std::cos(theta));
    out(1, k) = Scalar(std::sin(theta));
  }
  return DirectionSet<Scalar>::Normalized(std::move(out));
}

// Angles of a CircleGrid, in the same order.
inline std::vector<double> CircleGridAngles(Eigen::Index count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (Eigen::Index k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k + 1) /
                                static_cast<double>(count);
  }
  return out;
}

// Unit vector at azimuth phi and elevation theta.
template <typename Scalar = double>
VectorX<Scalar> SphericalDirection(double phi, double theta) {
  VectorX<Scalar> y(3);
  y << Scalar(std::cos(theta) * std::cos(phi)),
      Scalar(std::cos(theta) * std::sin(phi)), Scalar(std::sin(theta));
  return y;
}

// Equiangular grid on S^2: azimuth phi in (-pi, pi] (n_azimuth points) times
// elevation theta in [-pi/2, pi/2] (n_elevation points, endpoints included).
// Column index is a * n_elevation + e.
template <typename Scalar = double>
DirectionSet<Scalar> SphereGrid(Eigen::Index n_azimuth, Eigen::Index n_elevation) {
  if (n_azimuth < 1 || n_elevation < 2) {
    throw ValidationError("SphereGrid: need n_azimuth >= 1 and n_elevation >= 2");
  }
  const std::vector<double> phis = CircleGridAngles(n_azimuth);
  MatrixX<Scalar> out(3, n_azimuth * n_elevation);
  for (Eigen::Index a = 0; a < n_azimuth; ++a) {
    for (Eigen::Index e = 0; e < n_elevation; ++e) {
      const double theta = -std::numbers::pi / 2 +
                           std::numbers::pi * static_cast<double>(e) /
                               static_cast<double>(n_elevation - 1);
      out.col(a * n_elevation + e) =
          SphericalDirection<Scalar>(phis[static_cast<std::size_t>(a)], theta);
    }
  }
  return DirectionSet<Scalar>::Normalized(std::move(out));
}

// Default evaluation grid: 720 angles on S^1, 100 x 50 on S^2, and a seeded
// random set of `fallback_count` directions otherwise.
template <typename Scalar = double>
DirectionSet<Scalar> DefaultGrid(Eigen::Index dim,
                                 Eigen::Index fallback_count = 5000,
                                 std::uint64_t seed = 0) {
  if (dim == 2) return CircleGrid<Scalar>(720);
  if (dim == 3) return SphereGrid<Scalar>(100, 50);
  return SampleUnitDirections<Scalar>(dim, fallback_count, seed);
}

// h_hat(y_i) = max_j <y_i, x_j>.
template <typename Scalar>
SupportSamples<Scalar> EmpiricalSupport(const PointCloud<Scalar>& cloud,
                                        const DirectionSet<Scalar>& dirs) {
  CheckDimension(cloud.dim(), dirs.dim(), "EmpiricalSupport");
  // (n_y x d) * (d x n_x), rowwise max.
  VectorX<Scalar> values =
      (dirs.matrix().transpose() * cloud.matrix()).rowwise().maxCoeff();
  return SupportSamples<Scalar>(dirs, std::move(values));
}

// Drops all coordinates except `keep` (in the given order).
template <typename Scalar>
PointCloud<Scalar> ProjectCloud(const PointCloud<Scalar>& cloud,
                                const std::vector<int>& keep) {
  if (keep.empty()) throw ValidationError("ProjectCloud: no coordinates kept");
  MatrixX<Scalar> out(static_cast<Eigen::Index>(keep.size()), cloud.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    if (keep[r] < 0 || keep[r] >= cloud.dim()) {
      throw ValidationError("ProjectCloud: coordinate index " +
                            std::to_string(keep[r]) + " out of range for dimension " +
                            std::to_string(cloud.dim()));
    }
    out.row(static_cast<Eigen::Index>(r)) = cloud.matrix().row(keep[r]);
  }
  return PointCloud<Scalar>(std::move(out));
}

// max over the grid of |hA(y) - hB(y)|. A lower bound on the Hausdorff
// distance between the (closed convex hulls of the) represented sets.
template <typename Scalar>
Scalar HausdorffDistance(const SupportFunction<Scalar>& a,
                         const SupportFunction<Scalar>& b,
                         const DirectionSet<Scalar>& grid) {
  CheckDimension(a.dim(), b.dim(), "HausdorffDistance");
  CheckDimension(a.dim(), grid.dim(), "HausdorffDistance");
  return (a.Evaluate(grid) - b.Evaluate(grid)).cwiseAbs().maxCoeff();
}

// False iff some grid direction separates x from the set:
// <y, x> > h(y) + tol. True only means "not separated on this grid".
template <typename Scalar>
bool IsMember(const SupportFunction<Scalar>& h, const VectorX<Scalar>& x,
              const DirectionSet<Scalar>& grid,
              Scalar tol = Scalar(kSupportTolerance)) {
  CheckDimension(h.dim(), x.size(), "IsMember");
  CheckDimension(h.dim(), grid.dim(), "IsMember");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (grid[i].dot(x) > h(grid[i]) + tol) return false;
  }
  return true;
}

// Grid-certified inclusion A subset B: hA(y) <= hB(y) + tol on every grid y.
template <typename Scalar>
bool Includes(const SupportFunction<Scalar>& inner,
              const SupportFunction<Scalar>& outer,
              const DirectionSet<Scalar>& grid,
              Scalar tol = Scalar(kSupportTolerance)) {
  CheckDimension(inner.dim(), outer.dim(), "Includes");
  CheckDimension(inner.dim(), grid.dim(), "Includes");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (inner(grid[i]) > outer(grid[i]) + tol) return false;
  }
  return true;
}

// Support function of X_1 + ... + X_r.
template <typename Scalar>
SupportFunction<Scalar> MinkowskiSum(std::vector<SupportFunction<Scalar>> terms) {
  if (terms.empty()) throw ValidationError("MinkowskiSum: empty list");
  const Eigen::Index dim = terms.front().dim();
  for (const auto& t : terms) CheckDimension(dim, t.dim(), "MinkowskiSum");
  return SupportFunction<Scalar>(
      dim, [ts = std::move(terms)](const VectorX<Scalar>& z) {
        Scalar sum(0);
        for (const auto& t : ts) sum += t(z);
        return sum;
      });
}

// Support function of conv(X_1 u ... u X_r).
template <typename Scalar>
SupportFunction<Scalar> UnionHull(std::vector<SupportFunction<Scalar>> terms) {
  if (terms.empty()) throw ValidationError("UnionHull: empty list");
  const Eigen::Index dim = terms.front().dim();
  for (const auto& t : terms) CheckDimension(dim, t.dim(), "UnionHull");
  return SupportFunction<Scalar>(
      dim, [ts = std::move(terms)](const VectorX<Scalar>& z) {
        Scalar best = -std::numeric_limits<Scalar>::infinity();
        for (const auto& t : ts) best = std::max(best, t(z));
        return best;
      });
}

// Support function of A X + b: y -> <y, b> + h(A^T y).
template <typename Scalar>
SupportFunction<Scalar> AffineImage(SupportFunction<Scalar> h, MatrixX<Scalar> a,
                                    VectorX<Scalar> b) {
  if (a.rows() != a.cols()) throw ValidationError("AffineImage: A must be square");
  CheckDimension(h.dim(), a.rows(), "AffineImage");
  CheckDimension(h.dim(), b.size(), "AffineImage");
  const Eigen::Index dim = h.dim();
  return SupportFunction<Scalar>(
      dim, [h = std::move(h), a = std::move(a), b = std::move(b)](
               const VectorX<Scalar>& y) -> Scalar {
        const VectorX<Scalar> aty = a.transpose() * y;
        return y.dot(b) + h(aty);
      });
}

}  // namespace suplearn

#endif  // SUPLEARN_GEOMETRY_H_
