#pragma once

// Quadrature kernels for integrals against the weights t^r e^{-t} on (0, inf).
//
// Two families are provided:
//   * integrate_exp_kernel: int_0^inf g(t) t^r e^{-t} dt for a bounded,
//     piecewise smooth g supplied by the caller.
//   * poisson_integrals: the four Poisson-type moments
//       f0 = int w_r(t) / D,          f1 = int w_r(t) (t-x) / D,
//       g0 = int w_r(t) / D^2,        g1 = int w_r(t) (t-x) / D^2,
//     with D = (t-x)^2 + y^2 and w_r(t) = t^r e^{-t}. Every real and
//     imaginary part of the Cauchy-type integrals used downstream is a linear
//     combination of these.
//
// The Poisson kernel is integrated in the offset variable u = t - x, which is
// exact even when y is far below the spacing of doubles near x. On the
// symmetric window |u| <= min(x, T-x) the contributions at +u and -u are
// folded together; odd kernels then see w(x+u) - w(x-u), which is formed
// analytically (sinh/cosh) so the leading Lorentzian cancels exactly. Inside
// |u| <= 8y the substitution u = y tan(theta) absorbs the Lorentzian factor.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "freegamma/errors.hpp"
#include "freegamma/special.hpp"

namespace freegamma {

struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdiv = 2000;
  // Upper integration limit T for the e^{-t} kernels (raised to x + 40 for
  // Poisson kernels centred at x).
  double tail_cut = 50.0;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw InvalidInput("quadrature tolerances must be positive");
    if (max_subdiv < 8) throw InvalidInput("max_subdiv must be at least 8");
    // Remainder of int_T^inf t e^{-t} dt for kernels bounded by one.
    if (!((tail_cut + 1.0) * std::exp(-tail_cut) < 0.5 * abs_tol))
      throw InvalidInput("tail_cut too small for the requested abs_tol");
  }
};

struct IntegralResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions_used = 0;
};

namespace detail {

template <std::size_t N>
using Vec = std::array<double, N>;

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK ordering).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  int zone = 0;
  double a = 0.0;
  double b = 0.0;
};

template <std::size_t N>
struct Panel {
  Segment seg;
  Vec<N> value{};
  Vec<N> error{};
  Vec<N> floor{};  // roundoff floor 50 eps int|f|
};

template <std::size_t N, class F>
Panel<N> gk15(F& f, const Segment& seg) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (seg.a + seg.b);
  const double half = 0.5 * (seg.b - seg.a);

  std::array<Vec<N>, 15> fv;
  fv[7] = f(seg.zone, center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(seg.zone, center - dx);
    fv[14 - j] = f(seg.zone, center + dx);
  }

  Panel<N> out;
  out.seg = seg;
  for (std::size_t c = 0; c < N; ++c) {
    double resk = fv[7][c] * kWgk[7];
    double resg = fv[7][c] * kWg[3];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
      const double sum = fv[j][c] + fv[14 - j][c];
      resk += kWgk[j] * sum;
      resabs += kWgk[j] * (std::abs(fv[j][c]) + std::abs(fv[14 - j][c]));
      if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7][c] - reskh);
    for (int j = 0; j < 7; ++j)
      resasc += kWgk[j] * (std::abs(fv[j][c] - reskh) + std::abs(fv[14 - j][c] - reskh));
    const double ahalf = std::abs(half);
    resasc *= ahalf;
    resabs *= ahalf;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    double floor = 0.0;
    if (resabs > uflow / (50.0 * eps)) floor = 50.0 * eps * resabs;
    out.value[c] = resk * half;
    out.error[c] = std::max(err, floor);
    out.floor[c] = floor;
  }
  return out;
}

template <std::size_t N>
struct AdaptiveOutcome {
  Vec<N> value{};
  Vec<N> error{};
  int subdivisions = 0;
};

// Globally adaptive GK15: bisect the panel with the worst error-to-tolerance
// ratio until every active component meets max(abs_tol, rel_tol |I|).
// f(zone, s) is evaluated with the zone tag of the panel containing s.
template <std::size_t N, class F>
AdaptiveOutcome<N> integrate_adaptive(F&& f, std::span<const Segment> initial,
                                      const QuadratureSettings& q,
                                      std::array<bool, N> active) {
  std::vector<Panel<N>> panels;
  panels.reserve(initial.size() + 64);
  AdaptiveOutcome<N> out;
  for (const auto& seg : initial) {
    if (!(seg.b > seg.a)) continue;
    panels.push_back(gk15<N>(f, seg));
    for (std::size_t c = 0; c < N; ++c) {
      out.value[c] += panels.back().value[c];
      out.error[c] += panels.back().error[c];
    }
  }
  std::vector<char> frozen(panels.size(), 0);

  while (true) {
    Vec<N> tol;
    bool done = true;
    for (std::size_t c = 0; c < N; ++c) {
      tol[c] = std::max(q.abs_tol, q.rel_tol * std::abs(out.value[c]));
      if (active[c] && out.error[c] > tol[c]) done = false;
    }
    if (done) break;

    std::size_t worst = panels.size();
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (frozen[i]) continue;
      for (std::size_t c = 0; c < N; ++c) {
        if (!active[c]) continue;
        const double ratio = panels[i].error[c] / tol[c];
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = i;
        }
      }
    }
    // Only roundoff-limited panels remain: the tolerance is unreachable in
    // double precision and the honest error estimate is reported as is.
    if (worst == panels.size()) break;

    const Segment seg = panels[worst].seg;
    const double mid = 0.5 * (seg.a + seg.b);
    const double width = seg.b - seg.a;
    bool at_floor = true;
    for (std::size_t c = 0; c < N; ++c)
      if (active[c] && panels[worst].error[c] > panels[worst].floor[c]) at_floor = false;
    if (at_floor || width <= 64.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(seg.a), std::abs(seg.b)) ||
        !(mid > seg.a && mid < seg.b)) {
      frozen[worst] = 1;
      continue;
    }
    if (out.subdivisions >= q.max_subdiv)
      throw NonConvergence("adaptive quadrature exceeded " + std::to_string(q.max_subdiv) +
                           " subdivisions");

    Panel<N> left = gk15<N>(f, Segment{seg.zone, seg.a, mid});
    Panel<N> right = gk15<N>(f, Segment{seg.zone, mid, seg.b});
    for (std::size_t c = 0; c < N; ++c) {
      out.value[c] += left.value[c] + right.value[c] - panels[worst].value[c];
      out.error[c] += left.error[c] + right.error[c] - panels[worst].error[c];
    }
    panels[worst] = left;
    panels.push_back(right);
    frozen.push_back(0);
    ++out.subdivisions;
  }

  // Re-sum to shed the drift of the running totals.
  out.value = {};
  out.error = {};
  for (const auto& p : panels)
    for (std::size_t c = 0; c < N; ++c) {
      out.value[c] += p.value[c];
      out.error[c] += p.error[c];
    }
  return out;
}

// Breakpoints from `start` to `end` graded geometrically away from a
// singularity at distance ~`scale` from the origin of the u-axis.
inline void graded_segments(std::vector<Segment>& out, int zone, double start, double end,
                            double scale, double sign = 1.0) {
  if (!(end > start)) return;
  double lo = start;
  double p = std::max(scale, start);
  if (p <= start) p = 4.0 * std::max(start, std::numeric_limits<double>::min());
  while (p < end) {
    if (sign > 0)
      out.push_back({zone, lo, p});
    else
      out.push_back({zone, -p, -lo});
    lo = p;
    p *= (p < 1.0 ? 4.0 : 2.0);
  }
  if (sign > 0)
    out.push_back({zone, lo, end});
  else
    out.push_back({zone, -end, -lo});
}

// Upper incomplete gamma Gamma(r+1, T) for integer r >= 0.
inline double upper_gamma_int(int r, double T) {
  double term = 1.0;
  double sum = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= r; ++k) {
    term *= T / k;
    sum += term;
    fact *= k;
  }
  return fact * std::exp(-T) * sum;
}

inline double int_pow(double b, int r) {
  double p = 1.0;
  for (int k = 0; k < r; ++k) p *= b;
  return p;
}

}  // namespace detail

/// int_0^inf g(t) t^r e^{-t} dt.
///
/// `scale` places geometric breakpoints scale*4^k below t = 1 for integrands
/// that vary on a short scale near the origin; `tail_sup` bounds |g| beyond
/// the truncation point, which is pushed out until the analytic remainder
/// tail_sup * Gamma(r+1, T) falls below abs_tol/2.
template <class G>
IntegralResult integrate_exp_kernel(G&& g, int r, const QuadratureSettings& q,
                                    double scale = 1.0, double tail_sup = 1.0) {
  if (r < 0) throw InvalidInput("integrate_exp_kernel: r must be non-negative");
  q.validate();
  double T = q.tail_cut;
  while (tail_sup * detail::upper_gamma_int(r, T) >= 0.5 * q.abs_tol) T += 5.0;
  const double remainder = tail_sup * detail::upper_gamma_int(r, T);

  std::vector<detail::Segment> segs;
  detail::graded_segments(segs, 0, 0.0, T, std::min(scale, 1.0));
  auto integrand = [&](int, double t) -> detail::Vec<1> {
    return {g(t) * detail::int_pow(t, r) * std::exp(-t)};
  };
  const auto res = detail::integrate_adaptive<1>(integrand, segs, q, {true});
  return {res.value[0], res.error[0] + remainder, res.subdivisions};
}

/// The Poisson-type moments of w_r(t) = t^r e^{-t} about x + iy.
struct PoissonIntegrals {
  double f0 = 0.0;  // int w / D
  double f1 = 0.0;  // int w (t - x) / D
  double g0 = 0.0;  // int w / D^2
  double g1 = 0.0;  // int w (t - x) / D^2
};

enum PoissonComponent : unsigned { kF0 = 1u, kF1 = 2u, kG0 = 4u, kG1 = 8u, kAllPoisson = 15u };

/// Computes the four Poisson moments with D = (t-x)^2 + y^2 for r in {0,1,2}.
/// Requires y >= 0, and y > 0 whenever x >= 0. `mask` selects the components
/// whose accuracy drives adaptive refinement; all four are always returned.
inline PoissonIntegrals poisson_integrals(double x, double y, int r, const QuadratureSettings& q,
                                          unsigned mask = kAllPoisson) {
  using detail::Segment;
  using detail::Vec;
  if (r < 0 || r > 2) throw InvalidInput("poisson_integrals: r must be 0, 1 or 2");
  if (!(y >= 0.0) || !std::isfinite(x)) throw InvalidInput("poisson_integrals: need finite x, y >= 0");
  if (x >= 0.0 && !(y > 0.0)) throw InvalidInput("poisson_integrals: kernel singular on [0, inf)");

  enum Zone { kTangent = 0, kSymmetric = 1, kDirect = 2 };
  const double T = std::max(q.tail_cut, x + 40.0);
  const double y2 = y * y;
  std::vector<Segment> segs;

  double L = 0.0;
  if (x > 0.0) {
    L = std::min(x, T - x);
    const double w = std::min(8.0 * y, L);
    if (w > 0.0) segs.push_back({kTangent, 0.0, std::atan(w / y)});
    detail::graded_segments(segs, kSymmetric, w, L, w);
    detail::graded_segments(segs, kDirect, L, T - x, std::max(L, y));
    if (x > L) detail::graded_segments(segs, kDirect, L, x, std::max(L, y), -1.0);
  } else {
    detail::graded_segments(segs, kDirect, -x, T - x, std::max(-x, y));
  }

  const double ex = x > 0.0 ? std::exp(-x) : 1.0;
  const double inv_y = y > 0.0 ? 1.0 / y : 0.0;

  // w(x+u) + w(x-u) and w(x+u) - w(x-u) for 0 <= u <= x.
  auto even_odd = [&](double u, double& E, double& O) {
    const double ep = std::exp(-u);
    const double em = std::exp(u);
    E = ex * (detail::int_pow(x + u, r) * ep + detail::int_pow(x - u, r) * em);
    if (u < 1.0) {
      const double sh = std::sinh(u);
      const double ch = std::cosh(u);
      switch (r) {
        case 0: O = -2.0 * ex * sh; break;
        case 1: O = ex * (2.0 * u * ch - 2.0 * x * sh); break;
        default: O = ex * (4.0 * x * u * ch - 2.0 * (x * x + u * u) * sh); break;
      }
    } else {
      O = ex * (detail::int_pow(x + u, r) * ep - detail::int_pow(x - u, r) * em);
    }
  };

  auto integrand = [&](int zone, double s) -> Vec<4> {
    if (zone == kTangent) {
      const double c = std::cos(s);
      const double sn = std::sin(s);
      double E, O;
      even_odd(y * (sn / c), E, O);
      return {E * inv_y, O * (sn / c), E * c * c * inv_y * inv_y * inv_y, O * sn * c * inv_y * inv_y};
    }
    const double u = s;
    const double inv_d = 1.0 / (u * u + y2);
    if (zone == kSymmetric) {
      double E, O;
      even_odd(u, E, O);
      const double e_d = E * inv_d;
      const double o_d = O * u * inv_d;
      return {e_d, o_d, e_d * inv_d, o_d * inv_d};
    }
    const double t = x + u;
    const double w = detail::int_pow(t, r) * std::exp(-t);
    const double w_d = w * inv_d;
    return {w_d, w_d * u, w_d * inv_d, w_d * u * inv_d};
  };

  const std::array<bool, 4> active = {(mask & kF0) != 0, (mask & kF1) != 0, (mask & kG0) != 0,
                                      (mask & kG1) != 0};
  const auto res = detail::integrate_adaptive<4>(integrand, segs, q, active);
  return {res.value[0], res.value[1], res.value[2], res.value[3]};
}

/// F(x + iy) = int_0^inf t e^{-t} / ((x-t)^2 + y^2) dt for y > 0.
inline double eval_F(double x, double y, const QuadratureSettings& q) {
  if (!(y > 0.0)) throw InvalidInput("eval_F requires y > 0");
  return poisson_integrals(x, y, 1, q, kF0).f0;
}

/// F(-c) for c > 0, by the closed form (1+c) e^c E1(c) - 1, cross-checked
/// against direct quadrature of int t e^{-t}/(c+t)^2 dt.
inline double eval_F_negative_axis(double c, const QuadratureSettings& q) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("eval_F_negative_axis requires c > 0");
  const double closed = F_negative_axis_closed_form(std::log(c));
  const double quad = poisson_integrals(-c, 0.0, 1, q, kF0).f0;
  const double tol = 10.0 * std::max(q.abs_tol, q.rel_tol * std::abs(closed));
  if (std::abs(closed - quad) > tol)
    throw CrossCheckFailure("F(-c): closed form " + std::to_string(closed) + " vs quadrature " +
                            std::to_string(quad));
  return closed;
}

}  // namespace freegamma
