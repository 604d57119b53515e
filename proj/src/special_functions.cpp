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

#include "swarmsim/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "swarmsim/errors.hpp"

namespace swarmsim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny =
    std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

// Series representation of P(a, x), valid (and fast) for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("lower_regularized_gamma: series did not converge");
}

// Continued fraction for Q(a, x) = 1 - P(a, x), modified Lentz, x >= a + 1.
double gamma_q_contfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw NumericError("lower_regularized_gamma: continued fraction stalled");
}

}  // namespace

double lower_regularized_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x)) {
    throw std::invalid_argument("lower_regularized_gamma: need a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double inv_lower_regularized_gamma(double a, double p) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("inv_lower_regularized_gamma: need a > 0");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument(
        "inv_lower_regularized_gamma: need p in (0, 1)");
  }

  const double gln = std::lgamma(a);
  const double a1 = a - 1.0;
  double x;

  // Starting point: Wilson-Hilferty for a > 1, small-a expansion otherwise.
  if (a > 1.0) {
    double z = probit(p);
    double t = 2.0 / (9.0 * a);
    x = a * std::pow(1.0 - t / 2.0 + z * std::sqrt(t / 2.0), 3.0);
    if (x <= 0.0) x = 1e-6 * a;
  } else {
    double t = 1.0 - a * (0.253 + a * 0.12);
    if (p < t) {
      x = std::pow(p / t, 1.0 / a);
    } else {
      x = 1.0 - std::log(1.0 - (p - t) / (1.0 - t));
    }
  }

  // Halley iterations on P(a, x) - p, then verify the residual.
  const double lna1 = (a > 1.0) ? std::log(a1) : 0.0;
  const double afac = (a > 1.0) ? std::exp(a1 * (lna1 - 1.0) - gln) : 0.0;
  for (int it = 0; it < 32; ++it) {
    if (x <= 0.0) x = kTiny;
    double err = lower_regularized_gamma(a, x) - p;
    double t;
    if (a > 1.0) {
      t = afac * std::exp(-(x - a1) + a1 * (std::log(x) - lna1));
    } else {
      t = std::exp(-x + a1 * std::log(x) - gln);
    }
    if (t <= 0.0) break;
    double u = err / t;
    double dx = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - 1.0)));
    x -= dx;
    if (x <= 0.0) x = 0.5 * (x + dx);  // halve back toward the previous point
    if (std::fabs(dx) < kEps * x) break;
  }

  double resid = lower_regularized_gamma(a, x) - p;
  if (std::fabs(resid) > 1e-12) {
    // Safeguarded bisection polish; the derivative can underflow far in the
    // tails where Halley stalls.
    double lo = 0.0, hi = std::max(2.0 * x, 16.0 * (a + 1.0));
    while (lower_regularized_gamma(a, hi) < p) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) {
        throw NumericError("inv_lower_regularized_gamma: no upper bracket");
      }
    }
    for (int it = 0; it < 200 && std::fabs(resid) > 1e-13; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      double pm = lower_regularized_gamma(a, mid);
      if (pm < p) {
        lo = mid;
      } else {
        hi = mid;
      }
      x = mid;
      resid = pm - p;
    }
    if (std::fabs(resid) > 1e-12) {
      throw NumericError("inv_lower_regularized_gamma: did not converge");
    }
  }
  return x;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double probit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("probit: need p in (0, 1)");
  }

  // Acklam's rational approximation, |error| < 1.2e-9 over (0, 1).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Newton step against the exact CDF.
  double e = normal_cdf(x) - p;
  double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0));
  if (pdf > 0.0) x -= e / pdf;
  return x;
}

}  // namespace swarmsim
