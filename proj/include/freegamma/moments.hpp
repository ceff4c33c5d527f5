#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "freegamma/density.hpp"
#include "freegamma/errors.hpp"
#include "freegamma/landscape.hpp"

namespace freegamma {

struct CumulantMomentSequence {
  double alpha = 0.0;
  int order = 0;
  std::vector<double> r;  // r[0] = r_1
  std::vector<double> m;  // m[0] = m_1

  double cumulant(int p) const { return r.at(static_cast<std::size_t>(p - 1)); }
  double moment(int p) const { return m.at(static_cast<std::size_t>(p - 1)); }
};

struct DensityMoments {
  double mass = 0.0;
  std::vector<double> m;  // m[0] = m_1
};

/// r_p = alpha (p-1)!, p = 1..p_max.
inline std::vector<double> free_cumulants(double alpha, int p_max) {
  if (p_max < 1) throw InvalidInput("p_max must be at least 1");
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  std::vector<double> r(static_cast<std::size_t>(p_max));
  double fact = 1.0;
  for (int p = 1; p <= p_max; ++p) {
    r[p - 1] = alpha * fact;
    fact *= p;
  }
  return r;
}

/// m_p = sum_{k=1}^{p} (1/k) C(p, k-1) sum_{q_1+..+q_k = p} r_{q_1} ... r_{q_k},
/// the composition sums taken as k-fold convolution powers of r.
inline std::vector<double> moments_from_cumulants(const std::vector<double>& r, int p_max) {
  if (p_max < 1) throw InvalidInput("p_max must be at least 1");
  if (r.size() < static_cast<std::size_t>(p_max)) throw InvalidInput("need at least p_max cumulants");
  const std::size_t n = static_cast<std::size_t>(p_max);

  // seq[j] holds the coefficient of z^j; index 0 unused since q_i >= 1.
  std::vector<double> base(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) base[j] = r[j - 1];
  std::vector<std::vector<double>> power(n + 1);  // power[k] = base^{*k}
  power[1] = base;
  for (std::size_t k = 2; k <= n; ++k) {
    power[k].assign(n + 1, 0.0);
    for (std::size_t i = k - 1; i <= n; ++i) {
      if (power[k - 1][i] == 0.0) continue;
      for (std::size_t j = 1; i + j <= n; ++j) power[k][i + j] += power[k - 1][i] * base[j];
    }
  }

  std::vector<double> m(n, 0.0);
  for (std::size_t p = 1; p <= n; ++p) {
    double binom = 1.0;  // C(p, k-1), starting at k = 1
    double sum = 0.0;
    for (std::size_t k = 1; k <= p; ++k) {
      sum += binom / static_cast<double>(k) * power[k][p];
      binom = binom * static_cast<double>(p - k + 1) / static_cast<double>(k);
    }
    m[p - 1] = sum;
  }
  return m;
}

inline CumulantMomentSequence cumulant_moment_sequence(double alpha, int p_max) {
  CumulantMomentSequence out;
  out.alpha = alpha;
  out.order = p_max;
  out.r = free_cumulants(alpha, p_max);
  out.m = moments_from_cumulants(out.r, p_max);
  return out;
}

/// Mass and m_1..m_{p_max} = int xi^p f(xi) dxi by quadrature over the support.
inline DensityMoments moments_from_density(const AlphaContext& ctx, int p_max) {
  if (p_max < 1 || p_max > 10) throw InvalidInput("moments_from_density supports 1 <= p_max <= 10");
  if (!ctx.edge_resolved) throw InvalidInput("moments_from_density needs a resolved support edge");
  std::array<bool, 11> active{};
  for (int p = 0; p <= p_max; ++p) active[p] = true;
  const auto vals = detail::integrate_density<11>(
      ctx,
      [p_max](const detail::CurveState& st) {
        std::array<double, 11> pw{};
        pw[0] = 1.0;
        for (int p = 1; p <= p_max; ++p) pw[p] = pw[p - 1] * st.p;
        return pw;
      },
      active);
  DensityMoments out;
  out.mass = vals[0];
  out.m.assign(vals.begin() + 1, vals.begin() + 1 + p_max);
  return out;
}

/// m_p(alpha)/alpha for p = 1..p_max; tends to (p-1)! as alpha -> 0.
inline std::vector<double> small_alpha_moment_limit(double alpha, int p_max) {
  if (!(alpha > 0.0) || alpha > 0.01) throw InvalidInput("small_alpha_moment_limit needs 0 < alpha <= 0.01");
  auto m = moments_from_cumulants(free_cumulants(alpha, p_max), p_max);
  for (double& v : m) v /= alpha;
  return m;
}

}  // namespace freegamma
