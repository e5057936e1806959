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

#ifndef SUPLEARN_TESTS_TEST_UTIL_H_
#define SUPLEARN_TESTS_TEST_UTIL_H_

// Seeded generators for property tests.

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <vector>

#include "suplearn/geometry.h"
#include "suplearn/regress_isnn.h"

namespace suplearn::testing {

inline Eigen::VectorXd RandomGaussian(std::mt19937_64& rng, Eigen::Index n, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline Eigen::MatrixXd RandomMatrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                    double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

inline double RandomUniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::VectorXd RandomUnit(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::VectorXd v;
  do {
    v = RandomGaussian(rng, d);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

inline PointCloud<double> RandomCloud(std::mt19937_64& rng, Eigen::Index d, Eigen::Index n,
                                      double sd = 1.0) {
  return PointCloud<double>(RandomMatrix(rng, d, n, sd));
}

// Uniform points in the unit disk by rejection.
inline PointCloud<double> UniformDisk(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(2, n);
  for (Eigen::Index j = 0; j < n;) {
    const double a = u(rng), b = u(rng);
    if (a * a + b * b <= 1.0) {
      m(0, j) = a;
      m(1, j) = b;
      ++j;
    }
  }
  return PointCloud<double>(std::move(m));
}

// Valid parameters: Gaussian passthrough, nonnegative feedforward with a
// fraction of exact zeros.
inline IsnnParams<double> RandomIsnnParams(std::mt19937_64& rng, Eigen::Index d,
                                           const std::vector<Eigen::Index>& widths) {
  IsnnParams<double> p;
  std::bernoulli_distribution zero(0.2);
  Eigen::Index prev = 0;
  for (std::size_t l = 0; l <= widths.size(); ++l) {
    const Eigen::Index rows = l < widths.size() ? widths[l] : 1;
    p.passthrough.push_back(RandomMatrix(rng, rows, d));
    if (l > 0) {
      Eigen::MatrixXd w = RandomMatrix(rng, rows, prev).cwiseAbs();
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (zero(rng)) w.data()[i] = 0.0;
      }
      p.feedforward.push_back(std::move(w));
    }
    prev = rows;
  }
  return p;
}

inline std::vector<Eigen::Index> RandomWidths(std::mt19937_64& rng, int max_layers = 5,
                                              Eigen::Index max_width = 12) {
  std::uniform_int_distribution<int> layers(1, max_layers);
  std::uniform_int_distribution<Eigen::Index> width(1, max_width);
  std::vector<Eigen::Index> out(static_cast<std::size_t>(layers(rng)));
  for (auto& w : out) w = width(rng);
  return out;
}

}  // namespace suplearn::testing

#endif  // SUPLEARN_TESTS_TEST_UTIL_H_
