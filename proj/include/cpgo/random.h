/*
 * Copyright 2026 The cpgo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CPGO_RANDOM_H_
#define CPGO_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

#include "Eigen/Core"

namespace cpgo {

// Seeded generator used by every stochastic routine in the library.
//
// Bits come from std::mt19937_64. Uniform variates use the top 53 bits and
// Gaussians use Box-Muller, so a seed maps to the same stream on every
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform in {0, ..., n - 1}; n must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Standard normal variate.
  double Gaussian();

  // Isotropic Gaussian vector N(0, sigma^2 I_3).
  Eigen::Vector3d Gaussian3(double sigma);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace cpgo

#endif  // CPGO_RANDOM_H_
