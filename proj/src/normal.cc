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

#include "suplearn/normal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "suplearn/errors.h"

namespace suplearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassFloor = 1e-14;

// Acklam's rational approximation of the normal quantile (relative error
// about 1e-9), refined below with Halley steps against erfc.
double QuantileInitialGuess(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double NormalDensity(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Robert's exponential-proposal rejection for N(0,1) on [lower, upper] with
// lower >= 0.
double SampleUpperTail(double lower, double upper, std::mt19937_64& rng) {
  const double alpha = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  // A narrow window is better served by a uniform proposal.
  if (upper - lower < 1.0 / alpha) {
    for (;;) {
      const double z = lower + (upper - lower) * UniformUnit(rng);
      const double accept = std::exp(0.5 * (lower * lower - z * z));
      if (UniformUnit(rng) <= accept) return z;
    }
  }
  for (;;) {
    const double z = lower - std::log1p(-UniformUnit(rng)) / alpha;
    if (z > upper) continue;
    const double accept = std::exp(-0.5 * (z - alpha) * (z - alpha));
    if (UniformUnit(rng) <= accept) return z;
  }
}

// Sampling for intervals with negligible CDF mass.
double SampleLowMass(double lower, double upper, std::mt19937_64& rng) {
  if (lower >= 0.0) return SampleUpperTail(lower, upper, rng);
  if (upper <= 0.0) return -SampleUpperTail(-upper, -lower, rng);
  // Straddles zero with tiny width: uniform proposal, density ratio vs 0.
  for (;;) {
    const double z = lower + (upper - lower) * UniformUnit(rng);
    if (UniformUnit(rng) <= std::exp(-0.5 * z * z)) return z;
  }
}

}  // namespace

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double NormalUpperTail(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double NormalQuantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("NormalQuantile: p outside [0, 1]");
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  double x = QuantileInitialGuess(p);
  // Halley refinement; work with the smaller tail to keep relative accuracy.
  for (int it = 0; it < 2; ++it) {
    const double err = (p < 0.5) ? NormalCdf(x) - p : -(NormalUpperTail(x) - (1.0 - p));
    const double pdf = NormalDensity(x);
    if (pdf == 0.0) break;
    const double u = err / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double SampleTruncatedStandardNormal(double lower, double upper,
                                     std::mt19937_64& rng) {
  if (!(lower <= upper)) {
    throw ValidationError("SampleTruncatedStandardNormal: lower > upper");
  }
  if (lower == upper) return lower;
  // Reflect so the interval's lower end is as far left as possible; the
  // computation then uses the lower tail Phi where it is accurate.
  bool flipped = false;
  if (lower > 0.0) {
    std::swap(lower, upper);
    lower = -lower;
    upper = -upper;
    flipped = true;
  }
  const double cdf_lo = NormalCdf(lower);
  const double cdf_hi = NormalCdf(upper);
  double z;
  if (cdf_hi - cdf_lo < kMassFloor) {
    z = SampleLowMass(lower, upper, rng);
  } else {
    const double u = cdf_lo + (cdf_hi - cdf_lo) * UniformUnit(rng);
    z = NormalQuantile(std::clamp(u, std::numeric_limits<double>::min(),
                                  std::nextafter(1.0, 0.0)));
    z = std::clamp(z, lower, upper);
  }
  return flipped ? -z : z;
}

double SampleTruncatedNormal(double mean, double sd, double lower, double upper,
                             std::mt19937_64& rng) {
  if (!(sd > 0.0)) throw NumericalError("SampleTruncatedNormal: sd must be > 0");
  const double z =
      SampleTruncatedStandardNormal((lower - mean) / sd, (upper - mean) / sd, rng);
  return std::clamp(mean + sd * z, lower, upper);
}

}  // namespace suplearn
