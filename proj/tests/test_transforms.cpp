#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "freegamma/transforms.hpp"

using namespace freegamma;
using namespace std::complex_literals;

namespace {

const AlphaContext& ctx_for(double alpha) {
  static const AlphaContext c05 = make_context(0.5);
  static const AlphaContext c1 = make_context(1.0);
  static const AlphaContext c2 = make_context(2.0);
  if (alpha == 0.5) return c05;
  if (alpha == 1.0) return c1;
  return c2;
}

struct GRef {
  ComplexValue z, g;
};

// -e^{-z} E1(-z) at 40 digits.
const GRef kG[] = {
    {{1.0, 0.5}, {0.284562287896677, -0.92411566300633091}},
    {{3.0, 1e-3}, {0.49441996562049889, -0.1565718530949222}},
    {{-2.0, 1.0}, {-0.31393708762034072, -0.11913813257946754}},
    {{0.2, -0.7}, {-0.36954783057588009, 0.86196999373573617}},
    {{25.0, 1e-8}, {0.04174647745066453, -6.1095036926283705e-11}},
    {{-1.0, 0.0}, {-0.5963473623231946, 0.0}},
};

std::vector<ComplexValue> subordination_grid(const AlphaContext& ctx) {
  std::vector<ComplexValue> zs;
  for (int i = 0; i < 5; ++i) {
    const double x = -ctx.c_alpha + (4.0 + ctx.c_alpha) * i / 4.0;
    const double v = v_alpha(ctx, x);
    for (double dy : {0.1, 0.5, 1.0, 2.0, 5.0}) zs.emplace_back(x, v + dy);
  }
  return zs;
}

}  // namespace

TEST(GMu1, MatchesClosedForm) {
  const QuadratureSettings q;
  for (const auto& r : kG) {
    const auto g = G_mu1(r.z, q);
    EXPECT_NEAR(g.real(), r.g.real(), 1e-10 * std::abs(r.g)) << r.z;
    EXPECT_NEAR(g.imag(), r.g.imag(), 1e-10 * std::abs(r.g)) << r.z;
  }
}

TEST(GMu1, InfinityAndSymmetry) {
  const QuadratureSettings q;
  const ComplexValue z = 1e3i;
  EXPECT_LT(std::abs(z * G_mu1(z, q) - 1.0), 1e-2);
  for (ComplexValue w : {ComplexValue{1, 0.5}, ComplexValue{-3, 2}, ComplexValue{7, 1e-4}})
    EXPECT_LT(std::abs(G_mu1(std::conj(w), q) - std::conj(G_mu1(w, q))), 1e-15);
  EXPECT_THROW(G_mu1({1.0, 0.0}, q), DomainViolation);
  EXPECT_THROW(G_mu1({0.0, 1e-15}, q), DomainViolation);
}

TEST(H, SeamAndCurve) {
  std::mt19937_64 rng(23);
  for (double a : {0.5, 1.0, 2.0}) {
    const auto& ctx = ctx_for(a);
    EXPECT_NEAR(H_alpha_at(ctx, -ctx.c_alpha).real(), ctx.s_alpha, 1e-8 * ctx.s_alpha);
    std::uniform_real_distribution<double> ux(-ctx.c_alpha, 30.0);
    for (int i = 0; i < 10; ++i) {
      const double x = ux(rng);
      if (x <= -ctx.c_alpha) continue;
      const ComplexValue z{x, v_alpha(ctx, x)};
      EXPECT_LT(std::abs(H_alpha_at(ctx, z).imag()), 1e-8) << a << " " << x;
      EXPECT_NEAR(H_alpha_at(ctx, z).real(), P_alpha(ctx, x), 1e-9 * std::max(1.0, x));
    }
  }
}

TEST(H, DifferentialEquation) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ux(-5.0, -0.1), uy(-3.0, 3.0);
  for (double a : {0.5, 1.0, 2.0}) {
    const auto& ctx = ctx_for(a);
    const ComplexValue z0{-2.0, 1.0};
    const auto res0 = H_alpha_prime_at(ctx, z0) - (a + z0 + (1.0 / z0 - 1.0) * H_alpha_at(ctx, z0));
    EXPECT_LT(std::abs(res0), 1e-6);
    for (int i = 0; i < 20; ++i) {
      const ComplexValue z{ux(rng), uy(rng)};
      const auto res = H_alpha_prime_at(ctx, z) - (a + z + (1.0 / z - 1.0) * H_alpha_at(ctx, z));
      EXPECT_LT(std::abs(res), 1e-6) << z;
    }
  }
}

TEST(H, DerivativeMatchesFiniteDifference) {
  const auto& ctx = ctx_for(1.0);
  for (ComplexValue z : {ComplexValue{1.0, 0.3}, ComplexValue{5.0, 0.01}, ComplexValue{-0.5, 2.0}}) {
    const double h = 1e-5;
    const auto fd = (H_alpha_at(ctx, z + h) - H_alpha_at(ctx, z - h)) / (2 * h);
    EXPECT_LT(std::abs(H_alpha_prime_at(ctx, z) - fd), 1e-6 * std::abs(fd)) << z;
  }
}

TEST(Voiculescu, LimitsAndIdentity) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto& ctx = ctx_for(a);
    EXPECT_LT(std::abs(voiculescu_transform(ctx, 1e-4i)), 1e-2);
    EXPECT_LT(std::abs(voiculescu_transform(ctx, 1e3i) - a), 1e-2);
    for (ComplexValue z : {ComplexValue{1.0, 0.5}, ComplexValue{-2.0, 3.0}}) {
      // H(z) = z + z C(1/z) with C(1/z) = phi(z)/z, and phi = alpha z G.
      const auto phi = voiculescu_transform(ctx, z);
      EXPECT_LT(std::abs(H_alpha_at(ctx, z) - (z + z * (phi / z))), 1e-10);
      EXPECT_LT(std::abs(phi - a * z * G_mu1(z, ctx.quad)), 1e-10);
    }
    EXPECT_THROW(voiculescu_transform(ctx, {1.0, -1.0}), DomainViolation);
  }
}

TEST(GNu, AsymptoticsHerglotzAndInversion) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto& ctx = ctx_for(a);
    const ComplexValue far = 1e3i;
    EXPECT_LT(std::abs(far * G_nu_from_density(ctx, far) - 1.0), 1e-2);
    for (ComplexValue z : {ComplexValue{0.0, 0.1}, ComplexValue{3.0, 1e-3}, ComplexValue{-2.0, 5.0}})
      EXPECT_LT(G_nu_from_density(ctx, z).imag(), 0.0);
    const auto mode = find_mode(ctx);
    const double smoothed = -G_nu_from_density(ctx, {mode.omega, 1e-6}).imag() / std::numbers::pi;
    EXPECT_NEAR(smoothed, mode.f_at_mode, 1e-3);
  }
  EXPECT_THROW(G_nu_from_density(ctx_for(1), {1.0, 0.0}), DomainViolation);
}

TEST(Subordination, Examples) {
  const auto& ctx = ctx_for(1.0);
  const ComplexValue z1{1.0, v_alpha(ctx, 1.0) + 1.0};
  const ComplexValue z2{-ctx.c_alpha, 1.0};
  EXPECT_LT(verify_subordination(ctx, std::vector<ComplexValue>{z1}), 1e-5);
  EXPECT_LT(verify_subordination(ctx, std::vector<ComplexValue>{z2}), 1e-5);
  const ComplexValue below{1.0, 0.5 * v_alpha(ctx, 1.0)};
  EXPECT_THROW(verify_subordination(ctx, std::vector<ComplexValue>{below}), DomainViolation);
}

TEST(Subordination, Grid) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto& ctx = ctx_for(a);
    EXPECT_LT(verify_subordination(ctx, subordination_grid(ctx)), 1e-5) << a;
  }
}
