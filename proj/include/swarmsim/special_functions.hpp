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

namespace swarmsim {

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
/// Series expansion for x < a+1, continued fraction otherwise.
double lower_regularized_gamma(double a, double x);

/// Inverse of P(a, .): returns x such that P(a, x) = p, 0 < p < 1.
/// Converges to |P(a,x) - p| < 1e-12.
double inv_lower_regularized_gamma(double a, double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile function (probit). Rational approximation
/// refined by a Newton step on the CDF; absolute error well below 1e-9.
double probit(double p);

}  // namespace swarmsim
