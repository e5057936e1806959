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

#ifndef SUPLEARN_NORMAL_H_
#define SUPLEARN_NORMAL_H_

#include <random>

namespace suplearn {

// Standard normal CDF Phi(x).
double NormalCdf(double x);

// Upper tail Q(x) = 1 - Phi(x), accurate for large x.
double NormalUpperTail(double x);

// Inverse of Phi on (0, 1). Returns -inf / +inf at 0 / 1.
double NormalQuantile(double p);

// Uniform double in [0, 1) with 53 random bits.
double UniformUnit(std::mt19937_64& rng);

// Draws from N(0, 1) conditioned on [lower, upper] (either end may be
// infinite). Uses inverse-CDF sampling on the numerically favourable tail;
// when the probability mass of the interval drops below 1e-14 it switches to
// exponential or uniform proposal rejection.
double SampleTruncatedStandardNormal(double lower, double upper,
                                     std::mt19937_64& rng);

// N(mean, sd^2) conditioned on [lower, upper].
double SampleTruncatedNormal(double mean, double sd, double lower, double upper,
                             std::mt19937_64& rng);

}  // namespace suplearn

#endif  // SUPLEARN_NORMAL_H_
