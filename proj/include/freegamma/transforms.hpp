#pragma once

// Cauchy-type transforms off the half-line [0, inf). Real and imaginary parts
// come from the Poisson moments of module quad:
//   int w(t)/(z-t) dt = -(f1 + i y f0),
//   int w(t)/(z-t)^2 dt = f0 - 2 y^2 g0 + 2 i y g1,     z = x + i y, y >= 0,
// and from conjugate symmetry for y < 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "freegamma/density.hpp"
#include "freegamma/errors.hpp"
#include "freegamma/landscape.hpp"
#include "freegamma/quad.hpp"

namespace freegamma {

using ComplexValue = std::complex<double>;

namespace detail {

inline void require_off_half_line(ComplexValue z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainViolation("z must be finite");
  if (std::abs(z.imag()) <= 1e-14 && z.real() >= -1e-14)
    throw DomainViolation("z lies on [0, inf)");
}

// int t^r e^{-t}/(z-t) dt and, optionally, int t^r e^{-t}/(z-t)^2 dt.
struct CauchyPair {
  ComplexValue first;
  ComplexValue second;
};

inline CauchyPair cauchy_weight(ComplexValue z, int r, const QuadratureSettings& q, bool want_second) {
  require_off_half_line(z);
  const double y = std::abs(z.imag());
  const auto I = poisson_integrals(z.real(), y, r, q, want_second ? kAllPoisson : (kF0 | kF1));
  CauchyPair out{{-I.f1, -y * I.f0}, {I.f0 - 2.0 * y * y * I.g0, 2.0 * y * I.g1}};
  if (z.imag() < 0.0) {
    out.first = std::conj(out.first);
    out.second = std::conj(out.second);
  }
  return out;
}

}  // namespace detail

/// G(z) = int e^{-t}/(z-t) dt.
inline ComplexValue G_mu1(ComplexValue z, const QuadratureSettings& q) {
  return detail::cauchy_weight(z, 0, q, false).first;
}

/// H(z) = z + alpha + alpha int t e^{-t}/(z-t) dt.
inline ComplexValue H_alpha_at(const AlphaContext& ctx, ComplexValue z) {
  return z + ctx.alpha + ctx.alpha * detail::cauchy_weight(z, 1, ctx.quad, false).first;
}

/// H'(z) = 1 - alpha int t e^{-t}/(z-t)^2 dt.
inline ComplexValue H_alpha_prime_at(const AlphaContext& ctx, ComplexValue z) {
  return 1.0 - ctx.alpha * detail::cauchy_weight(z, 1, ctx.quad, true).second;
}

/// phi(z) = alpha + alpha int t e^{-t}/(z-t) dt = alpha z G(z), Im z > 0.
inline ComplexValue voiculescu_transform(const AlphaContext& ctx, ComplexValue z) {
  if (!(z.imag() > 0.0)) throw DomainViolation("voiculescu_transform needs Im z > 0");
  return ctx.alpha + ctx.alpha * detail::cauchy_weight(z, 1, ctx.quad, false).first;
}

/// int f(xi)/(z - xi) dxi over the support, Im z > 0.
inline ComplexValue G_nu_from_density(const AlphaContext& ctx, ComplexValue z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainViolation("G_nu_from_density needs finite z with Im z > 0");
  if (!ctx.edge_resolved) throw InvalidInput("G_nu_from_density needs a resolved support edge");

  // Close to the support the kernel is a Lorentzian of width Im z around
  // P^{-1}(Re z); give the integrator breakpoints there.
  std::vector<double> breaks;
  if (z.real() > ctx.s_alpha && z.imag() < 1.0 && z.real() < ctx.s_alpha + 80.0) {
    const auto st = detail::invert_P_state(ctx, z.real());
    const double w = z.imag() / std::max(st.dp, 1e-3);
    breaks.push_back(st.x);
    for (double k : {1.0, 10.0, 100.0}) {
      breaks.push_back(st.x - k * w);
      breaks.push_back(st.x + k * w);
    }
  }
  const auto v = detail::integrate_density<2>(
      ctx,
      [z](const detail::CurveState& st) {
        const ComplexValue k = 1.0 / (z - st.p);
        return std::array<double, 2>{k.real(), k.imag()};
      },
      {true, true}, breaks);
  return {v[0], v[1]};
}

/// max |z G_nu(H(z)) - 1| over samples with Im z > v(Re z).
inline double verify_subordination(const AlphaContext& ctx, std::span<const ComplexValue> samples) {
  double worst = 0.0;
  for (const auto& z : samples) {
    if (!(z.imag() > v_alpha(ctx, z.real())))
      throw DomainViolation("sample lies below the curve y = v(x)");
    const ComplexValue h = H_alpha_at(ctx, z);
    worst = std::max(worst, std::abs(z * G_nu_from_density(ctx, h) - 1.0));
  }
  return worst;
}

}  // namespace freegamma
