#pragma once

// The density of the law: f(xi) = Q(x)/pi at the point x with P(x) = xi,
// plus the mode, edge and tabulation helpers built on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "freegamma/errors.hpp"
#include "freegamma/landscape.hpp"
#include "freegamma/quad.hpp"

namespace freegamma {

enum class GridKind { uniform, log_edge };

struct DensityTable {
  double alpha = 0.0;
  std::vector<double> xi;
  std::vector<double> f;
  GridKind grid_kind = GridKind::uniform;
};

struct ModeReport {
  double omega = 0.0;
  double f_at_mode = 0.0;
  double bracket_width = 0.0;  // final golden-section bracket, in x
};

struct ProfileSample {
  double x = 0.0;
  double scaled_density = 0.0;  // f_alpha(x)/alpha
  double limit = 0.0;           // e^{-x}/x
};

/// sqrt(2) / (pi c sqrt(s - c^2)): f(s + d) ~ K sqrt(d) as d -> 0.
inline double edge_coefficient(const AlphaContext& ctx) {
  const double c = ctx.c_alpha;
  const double gap = ctx.s_alpha - c * c;
  if (!ctx.edge_resolved || !(gap > 0.0)) throw DegenerateSlope("edge coefficient needs s_alpha > c_alpha^2");
  return std::numbers::sqrt2 / (std::numbers::pi * c * std::sqrt(gap));
}

namespace detail {

inline constexpr double kEdgeWindow = 1e-10;

// Relative to s when s < 1: the linear regime of P shrinks with the gap.
inline double edge_window(const AlphaContext& ctx) { return kEdgeWindow * std::min(1.0, ctx.s_alpha); }

// Slope of P just right of the seam, -gamma H''(-c)/2.
inline double edge_slope(const AlphaContext& ctx) { return -0.5 * ctx.gamma_alpha * ctx.h2; }

// Solves P(x) = xi. `guess` seeds the bracket search (default xi - alpha).
inline CurveState invert_P_state(const AlphaContext& ctx, double xi, const CurveState* guess = nullptr) {
  if (!std::isfinite(xi)) throw InvalidInput("xi must be finite");
  const double c = ctx.c_alpha;
  const double s = ctx.s_alpha;
  if (xi == s) return curve_state(ctx, -c);
  if (ctx.edge_resolved && xi > s && xi - s < edge_window(ctx)) {
    // P is linear to within O(d^{3/2}) this close to the seam.
    const double x = -c + (xi - s) / edge_slope(ctx);
    if (x > -c) return curve_state(ctx, x);
  }

  const bool right = xi > s;
  // Scaled down near a seam with s < 1 (P and its jitter shrink with s there),
  // floored at the rounding of P = x + alpha - alpha f1.
  double scale = std::max(1.0, std::abs(xi));
  if (right) scale = std::min(scale, std::max(xi - s, s));
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (ctx.alpha + std::abs(xi) + c);
  const double target_tol = std::max(1e-3 * ctx.root_tol * scale, floor);
  // Accepting 1e-6 of the gap bounds the relative error of f = Q/pi near the edge by ~5e-7.
  double accept_tol = std::max(10.0 * ctx.root_tol * scale, 8.0 * floor);
  if (right) accept_tol = std::max(accept_tol, 1e-6 * (xi - s));

  double x = guess ? guess->x + (xi - guess->p) / std::max(guess->dp, 1e-3) : xi - ctx.alpha;
  if (right) x = std::max(x, -c + 1e-12 * std::max(1.0, c));
  else x = std::min(x, -c - 1e-12 * std::max(1.0, c));
  if (right && !(x > -c)) x = std::nextafter(-c, 1.0);

  // Bracket [lo, hi] with P(lo) < xi < P(hi).
  double lo = right ? -c : -std::numeric_limits<double>::infinity();
  double hi = right ? std::numeric_limits<double>::infinity() : -c;
  double hint_v = guess ? guess->v : 0.0;
  CurveState st = curve_state(ctx, x, hint_v);
  CurveState best = st;
  double step = 1.0;
  for (int it = 0; it < 400; ++it) {
    const double r = st.p - xi;
    if (std::abs(r) < std::abs(best.p - xi)) best = st;
    if (std::abs(r) <= target_tol) return st;
    if (r < 0.0) lo = std::max(lo, st.x); else hi = std::min(hi, st.x);

    double next = st.dp > 0.0 ? st.x - r / st.dp : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) {
      if (std::isfinite(lo) && std::isfinite(hi)) {
        next = 0.5 * (lo + hi);
      } else if (!std::isfinite(hi)) {
        next = st.x + (step *= 2.0);
      } else {
        next = st.x - (step *= 2.0);
      }
    }
    if (std::isfinite(lo) && std::isfinite(hi) &&
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(next)))
      break;
    if (next == st.x) break;
    hint_v = st.v;
    st = curve_state(ctx, next, hint_v);
  }
  if (std::abs(best.p - xi) <= accept_tol) return best;
  throw NonConvergence("P inversion did not converge at xi = " + std::to_string(xi));
}

inline double density_from_state(const CurveState& st) { return st.q / std::numbers::pi; }

// int phi(xi) f(xi) dxi over the support, computed in x-space as
// (1/pi) int phi(P(x)) Q(x) P'(x) dx on [-c, X], X = s + 80, with x = -c + sigma^2
// on the first unit. phi(state) returns N components.
template <std::size_t N, class Phi>
std::array<double, N> integrate_density(const AlphaContext& ctx, Phi&& phi, std::array<bool, N> active,
                                        std::span<const double> extra_breaks = {}) {
  QuadratureSettings outer = ctx.quad;
  outer.abs_tol = 100.0 * ctx.quad.abs_tol;
  outer.rel_tol = 100.0 * ctx.quad.rel_tol;
  const double c = ctx.c_alpha;
  const double X = std::max(ctx.s_alpha, 0.0) + 80.0;

  std::vector<double> breaks;
  for (double d : {1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 30.0, 45.0, 65.0})
    if (-c + d < X) breaks.push_back(-c + d);
  for (double b : extra_breaks)
    if (b > -c + 1.0 && b < X) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // For small c the weight near the seam is spread evenly in log(x + c);
  // integrate that stretch in u = log(x + c) instead.
  std::vector<Segment> segs;
  if (c < 1e-3) {
    const double u0 = ctx.log_c - 70.0;
    segs.push_back({0, 0.0, std::exp(0.5 * u0)});
    for (double u = u0; u < 0.0; u += 20.0) segs.push_back({2, u, std::min(u + 20.0, 0.0)});
  } else {
    segs.push_back({0, 0.0, 1.0});
  }
  double prev = -c + 1.0;
  for (double b : breaks) {
    if (b > prev) segs.push_back({1, prev, b});
    prev = std::max(prev, b);
  }
  segs.push_back({1, prev, X});

  auto integrand = [&](int zone, double t) -> std::array<double, N> {
    double x = t;
    double jac = 1.0;
    if (zone == 0) {
      x = -c + t * t;
      jac = 2.0 * t;
    } else if (zone == 2) {
      jac = std::exp(t);
      x = -c + jac;
    }
    std::array<double, N> out{};
    if (!(x > -c)) return out;
    const CurveState st = curve_state(ctx, x);
    const double w = st.q * st.dp * jac / std::numbers::pi;
    if (w == 0.0) return out;
    const auto vals = phi(st);
    for (std::size_t k = 0; k < N; ++k) out[k] = w * vals[k];
    return out;
  };
  return integrate_adaptive<N>(integrand, segs, outer, active).value;
}

}  // namespace detail

/// x with P(x) = xi.
inline double invert_P(const AlphaContext& ctx, double xi) { return detail::invert_P_state(ctx, xi).x; }

/// Density f(xi); 0 on (-inf, s_alpha].
inline double f_alpha(const AlphaContext& ctx, double xi) {
  if (!std::isfinite(xi)) throw InvalidInput("xi must be finite");
  if (xi <= ctx.s_alpha) return 0.0;
  if (ctx.edge_resolved && xi - ctx.s_alpha < detail::edge_window(ctx))
    return edge_coefficient(ctx) * std::sqrt(xi - ctx.s_alpha);
  return detail::density_from_state(detail::invert_P_state(ctx, xi));
}

/// Mode of the density. Q is maximised in x (P is increasing, so the
/// maximiser carries over); coarse scan then golden section.
inline ModeReport find_mode(const AlphaContext& ctx) {
  if (!ctx.edge_resolved) throw NonConvergence("mode lies within c_alpha of the seam, below double range");
  const double c = ctx.c_alpha;
  std::vector<double> xs;
  for (int j = 30; j >= 4; --j) xs.push_back(-c + std::pow(10.0, -j) * std::max(1.0, c));
  constexpr int kScan = 400;
  for (int k = 1; k <= kScan; ++k) {
    const double x = -c + 40.0 * (static_cast<double>(k) / kScan) * (static_cast<double>(k) / kScan);
    if (x > xs.back()) xs.push_back(x);
  }
  std::vector<double> qs(xs.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    qs[i] = Q_alpha(ctx, xs[i]);
    if (qs[i] > qs[best]) best = i;
  }
  double a = best == 0 ? -c : xs[best - 1];
  double b = best + 1 < xs.size() ? xs[best + 1] : xs[best];
  if (!(qs[best] > 0.0)) throw NonConvergence("mode scan found no positive density");

  constexpr double g = 0.6180339887498949;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double q1 = Q_alpha(ctx, x1);
  double q2 = Q_alpha(ctx, x2);
  const double tol = 1e-10 * std::max(1.0, std::abs(xs[best]));
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (q1 < q2) {
      a = x1;
      x1 = x2;
      q1 = q2;
      x2 = a + g * (b - a);
      q2 = Q_alpha(ctx, x2);
    } else {
      b = x2;
      x2 = x1;
      q2 = q1;
      x1 = b - g * (b - a);
      q1 = Q_alpha(ctx, x1);
    }
  }
  const double xm = q1 >= q2 ? x1 : x2;
  const auto st = detail::curve_state(ctx, xm);
  return {st.p, detail::density_from_state(st), b - a};
}

/// Samples of f on a uniform grid over [xi_min, xi_max], or on a grid that
/// clusters geometrically at max(xi_min, s_alpha):
///   xi_0 = base, xi_i = base + (xi_max - base) 10^{-8 (n-1-i)/(n-2)}.
/// Points are evaluated in order, each inversion seeded by its predecessor.
inline DensityTable density_table(const AlphaContext& ctx, double xi_min, double xi_max, int n,
                                  GridKind kind = GridKind::uniform) {
  if (n < 2) throw InvalidInput("density_table needs at least two points");
  if (!(xi_min < xi_max) || !std::isfinite(xi_min) || !std::isfinite(xi_max))
    throw InvalidInput("density_table needs finite xi_min < xi_max");
  DensityTable t;
  t.alpha = ctx.alpha;
  t.grid_kind = kind;
  t.xi.resize(n);
  if (kind == GridKind::uniform) {
    const double h = (xi_max - xi_min) / (n - 1);
    for (int i = 0; i < n; ++i) t.xi[i] = xi_min + h * i;
    t.xi[n - 1] = xi_max;
  } else {
    const double base = std::max(xi_min, ctx.s_alpha);
    if (!(base < xi_max)) throw InvalidInput("log-edge grid needs xi_max > s_alpha");
    t.xi[0] = base;
    for (int i = 1; i < n; ++i)
      t.xi[i] = n == 2 ? xi_max : base + (xi_max - base) * std::pow(10.0, -8.0 * (n - 1 - i) / (n - 2));
  }

  t.f.assign(n, 0.0);
  bool have_prev = false;
  detail::CurveState prev;
  for (int i = 0; i < n; ++i) {
    const double xi = t.xi[i];
    if (xi <= ctx.s_alpha) continue;
    if (ctx.edge_resolved && xi - ctx.s_alpha < detail::edge_window(ctx)) {
      t.f[i] = f_alpha(ctx, xi);
      continue;
    }
    prev = detail::invert_P_state(ctx, xi, have_prev ? &prev : nullptr);
    have_prev = true;
    t.f[i] = detail::density_from_state(prev);
  }
  return t;
}

/// (x, f(x)/alpha, e^{-x}/x) for small alpha, where f/alpha -> e^{-x}/x.
inline std::vector<ProfileSample> small_alpha_profile(double alpha, std::span<const double> xs) {
  if (!(alpha > 0.0) || alpha > 0.01) throw InvalidInput("small_alpha_profile needs 0 < alpha <= 0.01");
  const AlphaContext ctx = make_context(alpha);
  std::vector<ProfileSample> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (!(x > 0.0)) throw InvalidInput("small_alpha_profile needs x > 0");
    out.push_back({x, f_alpha(ctx, x) / alpha, std::exp(-x) / x});
  }
  return out;
}

}  // namespace freegamma
