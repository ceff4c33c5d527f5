#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "freegamma/errors.hpp"

namespace freegamma {

namespace detail {

// Tail K1 = b1 + a2/(b2 + a3/(b3 + ...)) of the continued fraction
//   e^c E1(c) = 1/(c+1 - 1/(c+3 - 4/(c+5 - ...))),  b_k = c+2k+1, a_k = -k^2,
// evaluated with the modified Lentz algorithm.
inline double e1_fraction_tail(double c) {
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double f = c + 3.0;
  double C = f;
  double D = 0.0;
  for (int k = 2; k < 10000; ++k) {
    const double a = -static_cast<double>(k) * k;
    const double b = c + 2.0 * k + 1.0;
    D = b + a * D;
    if (std::abs(D) < tiny) D = tiny;
    C = b + a / C;
    if (std::abs(C) < tiny) C = tiny;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < eps) return f;
  }
  throw NonConvergence("E1 continued fraction did not converge");
}

// sum_{k>=1} (-c)^k / (k k!)
inline double e1_series_remainder(double c) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -c / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) <= std::numeric_limits<double>::epsilon() * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// Scaled exponential integral e^c E1(c) for c > 0.
/// Power series for c <= 1, continued fraction above.
inline double exp_e1(double c) {
  if (!(c > 0.0)) throw InvalidInput("exp_e1 requires c > 0");
  if (c <= 1.0) {
    const double e1 = -std::numbers::egamma - std::log(c) - detail::e1_series_remainder(c);
    return std::exp(c) * e1;
  }
  return 1.0 / (c + 1.0 - 1.0 / detail::e1_fraction_tail(c));
}

/// Closed form of F(-c) = int_0^inf t e^{-t}/(c+t)^2 dt = (1+c) e^c E1(c) - 1,
/// parametrised by log c so that c far below the double range is admissible.
inline double F_negative_axis_closed_form(double log_c) {
  const double c = std::exp(log_c);
  if (c > 1.0) {
    // (1+c)/K - 1 with K = c+1-R rearranged to avoid cancellation for large c.
    const double R = 1.0 / detail::e1_fraction_tail(c);
    return R / (c + 1.0 - R);
  }
  const double e1 = -std::numbers::egamma - log_c - detail::e1_series_remainder(c);
  return (1.0 + c) * std::exp(c) * e1 - 1.0;
}

/// c * d/dc F(-c), same parametrisation. Used as a Newton slope only.
inline double F_negative_axis_log_slope(double log_c) {
  const double c = std::exp(log_c);
  if (c > 1.0) return c * (2.0 + c) * exp_e1(c) - (1.0 + c);
  const double e1 = -std::numbers::egamma - log_c - detail::e1_series_remainder(c);
  return c * (2.0 + c) * std::exp(c) * e1 - (1.0 + c);
}

}  // namespace freegamma
