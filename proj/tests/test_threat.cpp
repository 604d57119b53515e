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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "swarmsim/threat.hpp"

using namespace swarmsim;

namespace {

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("before start_step the output is bitwise unchanged") {
  CompromiseSpec spec;
  spec.kind = CompromiseKind::bias;
  spec.start_step = 100;
  spec.bias = vec2(5, 0);
  CompromiseState state;

  Eigen::VectorXd y = vec4(1.25, -3.5, 0.125, 2.0);
  Eigen::VectorXd out =
      apply_compromise(y, vec4(1, -3, 0, 2), spec, 99, vec2(0, 0), state, 2);
  CHECK(out(0) == y(0));
  CHECK(out(1) == y(1));
  CHECK(out(2) == y(2));
  CHECK(out(3) == y(3));
}

TEST_CASE("constant bias shifts only the position rows") {
  CompromiseSpec spec;
  spec.kind = CompromiseKind::bias;
  spec.start_step = 10;
  spec.bias = vec2(5, 0);
  CompromiseState state;

  Eigen::VectorXd y = vec4(1, 2, 3, 4);
  Eigen::VectorXd out =
      apply_compromise(y, vec4(1, 2, 3, 4), spec, 10, vec2(0, 0), state, 2);
  CHECK(out(0) == doctest::Approx(6.0));
  CHECK(out(1) == doctest::Approx(2.0));
  CHECK(out(2) == 3.0);
  CHECK(out(3) == 4.0);
}

TEST_CASE("ramp offset grows by rate per step") {
  CompromiseSpec spec;
  spec.kind = CompromiseKind::ramp_divert;
  spec.start_step = 0;
  spec.rate = 0.1;
  spec.divert_target = vec2(0, 0);
  CompromiseState state;

  // true position on the +x axis: offset direction is +x, away from target
  Eigen::VectorXd x_true = vec4(10, 0, 0, 0);
  Eigen::VectorXd y = vec4(10, 0, 0, 0);
  Eigen::VectorXd out =
      apply_compromise(y, x_true, spec, 9, vec2(0, 0), state, 2);
  CHECK((out.head(2) - y.head(2)).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out(0) > y(0));  // pushed away from the divert target
}

TEST_CASE("stuck freezes the first compromised reading") {
  CompromiseSpec spec;
  spec.kind = CompromiseKind::stuck;
  spec.start_step = 5;
  CompromiseState state;

  Eigen::VectorXd first = vec4(1, 2, 0.5, 0.5);
  Eigen::VectorXd out =
      apply_compromise(first, first, spec, 5, vec2(0, 0), state, 2);
  CHECK(out(0) == 1.0);
  CHECK(out(1) == 2.0);

  Eigen::VectorXd later = vec4(9, 9, 1, 1);
  out = apply_compromise(later, later, spec, 6, vec2(0, 0), state, 2);
  CHECK(out(0) == 1.0);
  CHECK(out(1) == 2.0);
  CHECK(out(2) == 1.0);  // velocity rows untouched
}

TEST_CASE("noise inflation rescales the position noise realization") {
  CompromiseSpec spec;
  spec.kind = CompromiseKind::noise_inflation;
  spec.start_step = 0;
  spec.noise_scale = 3.0;
  CompromiseState state;

  Eigen::VectorXd noise = vec2(0.2, -0.1);
  Eigen::VectorXd y = vec4(1.2, 1.9, 0, 0);  // truth (1,2) + noise
  Eigen::VectorXd out =
      apply_compromise(y, vec4(1, 2, 0, 0), spec, 0, noise, state, 2);
  CHECK(out(0) == doctest::Approx(1.2 + 2 * 0.2));
  CHECK(out(1) == doctest::Approx(1.9 + 2 * -0.1));
}

TEST_CASE("non-position rows are never altered") {
  CompromiseState state;
  Eigen::VectorXd y = vec4(0, 0, 7.5, -2.5);
  for (CompromiseKind kind :
       {CompromiseKind::bias, CompromiseKind::ramp_divert,
        CompromiseKind::stuck, CompromiseKind::noise_inflation}) {
    CompromiseSpec spec;
    spec.kind = kind;
    spec.start_step = 0;
    spec.bias = vec2(1, 1);
    spec.divert_target = vec2(5, 5);
    spec.rate = 0.5;
    spec.noise_scale = 2.0;
    CompromiseState st;
    Eigen::VectorXd out =
        apply_compromise(y, vec4(1, 1, 7.5, -2.5), spec, 3, vec2(0.1, 0.1), st, 2);
    CHECK(out(2) == 7.5);
    CHECK(out(3) == -2.5);
  }
}

TEST_CASE("invalid specs are rejected") {
  CompromiseState state;
  Eigen::VectorXd y = vec4(0, 0, 0, 0);

  CompromiseSpec ramp;
  ramp.kind = CompromiseKind::ramp_divert;
  ramp.rate = 0.0;
  ramp.divert_target = vec2(1, 1);
  CHECK_THROWS_AS(
      apply_compromise(y, y, ramp, 0, vec2(0, 0), state, 2),
      std::invalid_argument);

  CompromiseSpec noisy;
  noisy.kind = CompromiseKind::noise_inflation;
  noisy.noise_scale = 0.5;
  CHECK_THROWS_AS(
      apply_compromise(y, y, noisy, 0, vec2(0, 0), state, 2),
      std::invalid_argument);

  CompromiseSpec bias;
  bias.kind = CompromiseKind::bias;
  CHECK_THROWS_AS(apply_compromise(y, y, bias, 0, vec2(0, 0), state, 2),
                  std::invalid_argument);
}
