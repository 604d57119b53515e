/* Copyright 2026 The swarmsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "swarmsim/errors.hpp"

namespace swarmsim {

/// splitmix64 step; used to whiten seeds and derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministically derive a sub-stream seed from a base seed and up to two
/// salts (agent id, purpose tag, ...). Streams for distinct salts are
/// independent for practical purposes, which keeps per-agent draws identical
/// whether agents are stepped serially or in parallel.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t salt_a,
                                   std::uint64_t salt_b = 0) {
  std::uint64_t s = base;
  (void)splitmix64(s);
  s ^= 0x6a09e667f3bcc909ULL + salt_a;
  (void)splitmix64(s);
  s ^= 0xbb67ae8584caa73bULL + salt_b;
  return splitmix64(s);
}

/// Seeded PRNG for reproducible simulation.
///
/// Gaussian draws use an explicit Box-Muller transform (two uniforms per
/// normal, no pair caching) so the draw sequence depends only on the call
/// sequence, never on library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Standard normal draw, Box-Muller.
  double gaussian() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  /// Draw from N(0, cov) given a precomputed lower Cholesky factor.
  Eigen::VectorXd gaussian_with_factor(const Eigen::MatrixXd& chol_lower) {
    return chol_lower * gaussian_vector(chol_lower.rows());
  }

 private:
  std::mt19937_64 gen_;
};

/// Lower Cholesky factor of a symmetric positive definite matrix.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericError("cholesky_lower: matrix is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace swarmsim
