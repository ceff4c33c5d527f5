#pragma once

// The implicit curve y = v(x) on which H(z) = z + alpha + alpha int t e^{-t}/(z-t) dt
// is real, and the real-valued functions P = H(x + i v(x)), Q = v/(x^2+v^2)
// built from it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "freegamma/errors.hpp"
#include "freegamma/quad.hpp"
#include "freegamma/special.hpp"

namespace freegamma {

struct AlphaContext {
  double alpha = 0.0;
  double log_c = 0.0;  // log c_alpha; c_alpha itself underflows for alpha below ~1.4e-3
  double c_alpha = 0.0;
  double s_alpha = 0.0;
  double gamma_alpha = 0.0;
  double h2 = 0.0;  // H''(-c_alpha)
  double h3 = 0.0;  // H'''(-c_alpha)
  QuadratureSettings quad{};
  double root_tol = 1e-10;
  // False when c_alpha is too small for c^2 to be representable; h2, h3 and
  // gamma_alpha are NaN then and edge asymptotics are unavailable.
  bool edge_resolved = true;
};

struct CurvePoint {
  double x = 0.0;
  double v = 0.0;
  double q = 0.0;
  double p = 0.0;
};

namespace detail {

// Everything known at one point of the curve.
struct CurveState {
  double x = 0.0;
  double v = 0.0;
  double p = 0.0;       // P(x)
  double dp = 0.0;      // P'(x); 0 at the seam
  double q = 0.0;       // Q(x)
  double dv = 0.0;      // v'(x); only meaningful for x > -c
  double re_dh = 0.0;   // Re H'(x + i v)
  double im_dh = 0.0;   // Im H'(x + i v)
};

inline constexpr double kFlatThreshold = 1e-60;

// sum_{k>=0} (k+1)!/x^{k+1} and its x-derivative, truncated at the smallest term.
inline std::pair<double, double> large_x_series(double x) {
  double term = 1.0 / x;
  double sum = 0.0;
  double dsum = 0.0;
  for (int k = 0; k < 30; ++k) {
    sum += term;
    dsum -= term * (k + 1) / x;
    const double next = term * (k + 2) / x;
    if (next >= term || next < 1e-18 * sum) break;
    term = next;
  }
  return {sum, dsum};
}

// Curve height for x so far right that F is flat in y at double precision:
// F(x+iy) = pi x e^{-x}/y + B(x) + O(y), B(x) ~ 1/x^2 + 4/x^3 + 18/x^4.
inline double flat_height(double alpha, double x) {
  const double B = 1.0 / (x * x) + 4.0 / (x * x * x) + 18.0 / (x * x * x * x);
  const double a = std::exp(std::log(alpha * std::numbers::pi * x) - x);
  return a / (1.0 - alpha * B);
}

inline bool is_flat(double alpha, double x) {
  return x > 50.0 && std::log(alpha * std::numbers::pi * x) - x < std::log(kFlatThreshold);
}

inline CurveState state_from_integrals(const AlphaContext& ctx, double x, double v,
                                       const PoissonIntegrals& I) {
  const double a = ctx.alpha;
  CurveState st;
  st.x = x;
  st.v = v;
  st.p = x + a - a * I.f1;
  st.re_dh = 2.0 * a * v * v * I.g0;
  st.im_dh = -2.0 * a * v * I.g1;
  if (!(st.re_dh > 0.0))
    throw DegenerateSlope("Re H' = " + std::to_string(st.re_dh) + " at x = " + std::to_string(x));
  st.dp = (st.re_dh * st.re_dh + st.im_dh * st.im_dh) / st.re_dh;
  st.dv = I.g1 / (v * I.g0);
  st.q = v / (x * x + v * v);
  return st;
}

inline CurveState flat_state(const AlphaContext& ctx, double x) {
  const double a = ctx.alpha;
  const auto [sum, dsum] = large_x_series(x);
  CurveState st;
  st.x = x;
  st.v = flat_height(a, x);
  st.p = x + a + a * sum;
  st.dp = 1.0 + a * dsum;
  st.re_dh = st.dp;
  st.im_dh = 0.0;
  st.dv = st.v * (1.0 / x - 1.0);
  st.q = st.v / (x * x + st.v * st.v);
  return st;
}

inline CurveState below_seam_state(const AlphaContext& ctx, double x) {
  const auto I = poisson_integrals(x, 0.0, 1, ctx.quad, kF0 | kF1);
  const double a = ctx.alpha;
  CurveState st;
  st.x = x;
  st.p = x + a - a * I.f1;
  st.dp = 1.0 - a * I.f0;
  st.re_dh = st.dp;
  if (!(st.dp > 0.0))
    throw DegenerateSlope("H'(x) = " + std::to_string(st.dp) + " at x = " + std::to_string(x));
  return st;
}

inline double initial_height(const AlphaContext& ctx, double x) {
  const double a = ctx.alpha;
  const double top = std::sqrt(a);
  double y = std::numeric_limits<double>::quiet_NaN();
  if (ctx.edge_resolved && x + ctx.c_alpha < 0.5) {
    y = std::sqrt(ctx.gamma_alpha * (x + ctx.c_alpha));
  } else if (x > 2.0) {
    const double B = 1.0 / (x * x) + 4.0 / (x * x * x) + 18.0 / (x * x * x * x);
    y = a * std::numbers::pi * x * std::exp(-x) / std::max(0.5, 1.0 - a * B);
  }
  if (!(y > 0.0) || !(y < top)) y = 0.5 * top;
  return y;
}

// Solves F(x + i y) = 1/alpha for y > 0 (x > -c), safeguarded Newton on
// phi(s) = log(alpha F(x + i e^s)), which is strictly decreasing in s.
// phi(log sqrt(alpha)) < 0 because F(x+iy) < 1/y^2.
inline CurveState solve_curve(const AlphaContext& ctx, double x, double hint = 0.0) {
  const double a = ctx.alpha;
  if (is_flat(a, x)) return flat_state(ctx, x);

  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = -inf;
  double hi = 0.5 * std::log(a);
  double s = std::log(hint > 0.0 && hint < std::sqrt(a) ? hint : initial_height(ctx, x));
  const double phi_tol = 0.1 * std::min(ctx.root_tol, ctx.quad.rel_tol);
  const double step_tol = 1e-3 * ctx.root_tol;

  for (int it = 0; it < 200; ++it) {
    const double y = std::exp(s);
    const auto I = poisson_integrals(x, y, 1, ctx.quad, kF0 | kG0);
    const double phi = std::log(a * I.f0);
    const double dphi = -2.0 * y * y * I.g0 / I.f0;
    if (phi > 0.0) lo = s; else hi = s;

    const double newton = s - phi / dphi;
    const bool resolved = std::isfinite(lo) && hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                           std::max(1.0, std::abs(s));
    if (std::abs(phi) <= phi_tol || std::abs(newton - s) <= step_tol || resolved) {
      // Take the final Newton correction only when it is below resolution
      // and stays inside the bracket.
      const bool take = std::abs(phi) > phi_tol && newton > lo && newton < hi + step_tol;
      const double v = take ? std::exp(newton) : y;
      const auto J = poisson_integrals(x, v, 1, ctx.quad, kAllPoisson);
      return state_from_integrals(ctx, x, v, J);
    }
    double next = newton;
    if (!(next > lo && next < hi)) next = std::isfinite(lo) ? 0.5 * (lo + hi) : std::min(s, hi) - 4.0;
    s = next;
  }
  throw NonConvergence("curve solve did not converge at x = " + std::to_string(x));
}

// Full curve state at any x, including the analytic seam values.
inline CurveState curve_state(const AlphaContext& ctx, double x, double hint = 0.0) {
  if (!std::isfinite(x)) throw InvalidInput("x must be finite");
  const double c = ctx.c_alpha;
  if (x < -c) return below_seam_state(ctx, x);
  if (x == -c) {
    CurveState st;
    st.x = x;
    st.p = ctx.s_alpha;
    return st;
  }
  return solve_curve(ctx, x, hint);
}

}  // namespace detail

/// Builds the context for alpha: c_alpha is the root of F(-c) = 1/alpha,
/// found in log c by bracketing then safeguarded Newton on the closed form
/// of F(-c); the quadrature route is cross-checked whenever c >= 1e-30.
inline AlphaContext make_context(double alpha, const QuadratureSettings& quad = {},
                                 double root_tol = 1e-10) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be positive and finite");
  if (!(root_tol > 0.0)) throw InvalidInput("root_tol must be positive");
  quad.validate();

  const double target = 1.0 / alpha;
  auto phi = [&](double l) { return F_negative_axis_closed_form(l) - target; };

  // F(-c) ~ -log c - 1 - egamma for small c and ~ 1/c^2 for large c.
  double guess = alpha < 1.0 ? -1.0 / alpha - 1.0 - std::numbers::egamma : 0.5 * std::log(alpha);
  double lo = guess - 1.0;
  double hi = guess + 1.0;
  constexpr double kLogMin = -1e8;  // documented floor on log c
  constexpr double kLogMax = 700.0;
  double step = 1.0;
  while (phi(lo) < 0.0) {
    lo -= (step *= 2.0);
    if (lo < kLogMin) throw NonConvergence("c_alpha bracket left the admissible range");
  }
  step = 1.0;
  while (phi(hi) > 0.0) {
    hi += (step *= 2.0);
    if (hi > kLogMax) throw NonConvergence("c_alpha bracket left the admissible range");
  }

  double l = std::clamp(guess, lo, hi);
  for (int it = 0;; ++it) {
    if (it > 200) throw NonConvergence("c_alpha root did not converge");
    const double f = phi(l);
    if (f == 0.0) break;
    if (f > 0.0) lo = l; else hi = l;
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(l));
    double next = l - f / F_negative_axis_log_slope(l);
    if (std::abs(next - l) <= tol) {
      l = next;
      break;
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= tol) break;
    l = next;
  }

  AlphaContext ctx;
  ctx.alpha = alpha;
  ctx.quad = quad;
  ctx.root_tol = root_tol;
  ctx.log_c = l;
  const double c = std::exp(l);
  ctx.c_alpha = c;
  ctx.s_alpha = c * (alpha - c) / (1.0 + c);
  ctx.edge_resolved = c >= 1e-100;
  if (ctx.edge_resolved) {
    ctx.h2 = 1.0 - (alpha - c) / (c * (1.0 + c));
    ctx.h3 = -2.0 * ((alpha - c) / (1.0 + c)) / (c * c) - (1.0 + c) * ctx.h2 / c;
    ctx.gamma_alpha = 6.0 * ctx.h2 / ctx.h3;
  } else {
    ctx.h2 = ctx.h3 = ctx.gamma_alpha = std::numeric_limits<double>::quiet_NaN();
  }
  if (c >= 1e-30) (void)eval_F_negative_axis(c, quad);
  return ctx;
}

/// Height of the curve: 0 for x <= -c_alpha, else the root of F(x + iv) = 1/alpha.
inline double v_alpha(const AlphaContext& ctx, double x) { return detail::curve_state(ctx, x).v; }

/// v'(x) = int (t-x) w/D^2 / (v int w/D^2), w = t e^{-t}, D = (x-t)^2 + v^2.
inline double v_alpha_prime(const AlphaContext& ctx, double x) {
  if (!(x > -ctx.c_alpha)) throw InvalidInput("v_alpha_prime requires x > -c_alpha");
  return detail::curve_state(ctx, x).dv;
}

/// P(x) = H(x + i v(x)); equals s_alpha at the seam.
inline double P_alpha(const AlphaContext& ctx, double x) { return detail::curve_state(ctx, x).p; }

/// P'(x) = |H'|^2 / Re H' on the curve, H'(x) below the seam.
inline double P_alpha_prime(const AlphaContext& ctx, double x) {
  if (x == -ctx.c_alpha) throw InvalidInput("P_alpha_prime is not defined at -c_alpha");
  return detail::curve_state(ctx, x).dp;
}

/// Q(x) = v / (x^2 + v^2).
inline double Q_alpha(const AlphaContext& ctx, double x) { return detail::curve_state(ctx, x).q; }

inline CurvePoint curve_point(const AlphaContext& ctx, double x) {
  const auto st = detail::curve_state(ctx, x);
  return {st.x, st.v, st.q, st.p};
}

/// dc_alpha/dalpha = c(1+c) / (alpha (alpha - 2c - c^2)).
inline double dc_dalpha(const AlphaContext& ctx) {
  const double a = ctx.alpha;
  const double c = ctx.c_alpha;
  const double den = a - 2.0 * c - c * c;
  if (!(den > 0.0)) throw DegenerateSlope("alpha - 2c - c^2 is not positive");
  return c * (1.0 + c) / (a * den);
}

/// ds_alpha/dalpha = c (alpha+1) / (alpha (1+c)).
inline double ds_dalpha(const AlphaContext& ctx) {
  const double a = ctx.alpha;
  const double c = ctx.c_alpha;
  if (!(a - 2.0 * c - c * c > 0.0)) throw DegenerateSlope("alpha - 2c - c^2 is not positive");
  return c * (a + 1.0) / (a * (1.0 + c));
}

struct HeightBrackets {
  double lower = 0.0;
  double upper = 0.0;
};

/// Arctan brackets around v(x) evaluated at the computed height:
///   2 a (x-e) e^{-x-e} atan(e/v) <= v,
///   v <= 2 a (x+e) e^{-x+e} atan(e/v) / (1-e)   (x large enough).
inline HeightBrackets v_alpha_brackets(const AlphaContext& ctx, double x, double eps) {
  if (!(eps > 0.0) || !(eps < x) || !(eps < 1.0))
    throw InvalidInput("v_alpha_brackets requires 0 < eps < min(x, 1)");
  const double v = v_alpha(ctx, x);
  const double a = ctx.alpha;
  const double at = std::atan(eps / v);
  return {2.0 * a * (x - eps) * std::exp(-x - eps) * at,
          2.0 * a * (x + eps) * std::exp(-x + eps) * at / (1.0 - eps)};
}

}  // namespace freegamma
