#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "freegamma/quad.hpp"

using namespace freegamma;

namespace {

QuadratureSettings defaults() { return QuadratureSettings{}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Midpoint sum of t e^{-t}/(1+t)^2 over (0, 50] with 1e7 panels.
double riemann_oracle() {
  const int n = 10'000'000;
  const double h = 50.0 / n;
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * h;
    sum += t * std::exp(-t) / ((1.0 + t) * (1.0 + t));
  }
  return static_cast<double>(sum * h);
}

struct PoissonCase {
  double x, y;
  int r;
  double f0, f1, g0, g1;
};

// Reference values from 40-digit adaptive quadrature with breakpoints at the peak.
const PoissonCase kPoissonCases[] = {
    {1, 0.3, 1, 3.0136817868856729, 0.28048680046140365, 20.585757384950049, 0.20563387097196597},
    {5, 1e-3, 1, 105.92245723623732, -0.3537465997737869, 52919727.854345096, -42.341908387272261},
    {2, 1e-6, 0, 425168.50207013355, -0.67048228462178145, 2.1258416579392449e+17, -212584.12603506678},
    {-0.5, 0.2, 2, 0.34017079805534689, 0.72250289753757857, 0.14933644030599996, 0.20029978523007823},
    {-1, 0, 1, 0.19269472464638926, 0.40365263767680593, 0.064231574882129383, 0.10547895651520889},
    {0.5, 2, 1, 0.17046578189426647, 0.16232815849013928, 0.033863148229752615, 0.023344136400748406},
    {30, 1e-9, 1, 0.010105883850684958, -0.035813653770855384, 4409675936095709.7, -0.0043090584979583657},
};

}  // namespace

TEST(Settings, Validation) {
  QuadratureSettings q;
  EXPECT_NO_THROW(q.validate());
  q.abs_tol = 0;
  EXPECT_THROW(q.validate(), InvalidInput);
  q = {};
  q.max_subdiv = 4;
  EXPECT_THROW(q.validate(), InvalidInput);
  q = {};
  q.tail_cut = 5;
  EXPECT_THROW(q.validate(), InvalidInput);
}

TEST(ExpKernel, GammaNormalisations) {
  auto one = [](double) { return 1.0; };
  EXPECT_NEAR(integrate_exp_kernel(one, 0, defaults()).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_exp_kernel(one, 1, defaults()).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_exp_kernel(one, 2, defaults()).value, 2.0, 1e-12);
  EXPECT_NEAR(integrate_exp_kernel(one, 5, defaults()).value, 120.0, 1e-9);
}

TEST(ExpKernel, RejectsNegativePower) {
  EXPECT_THROW(integrate_exp_kernel([](double) { return 1.0; }, -1, defaults()), InvalidInput);
}

TEST(ExpKernel, MatchesBruteForceRiemannSum) {
  const double oracle = riemann_oracle();
  // Discarded tail beyond 50 is below 1e-20, midpoint error O(h^2) ~ 1e-13.
  EXPECT_NEAR(oracle, 0.19269472464638926, 1e-11);
  const auto res = integrate_exp_kernel([](double t) { return 1.0 / ((1 + t) * (1 + t)); }, 1, defaults());
  EXPECT_NEAR(res.value, oracle, 1e-11);
  EXPECT_GE(res.err_estimate, 0.0);
  EXPECT_LE(res.subdivisions_used, defaults().max_subdiv);
}

TEST(ExpKernel, ReportsNonConvergence) {
  QuadratureSettings q;
  q.max_subdiv = 8;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-15;
  // Discontinuous integrand forces refinement at the jump.
  auto step = [](double t) { return t < 1.2345678 ? 1.0 : 0.0; };
  EXPECT_THROW(integrate_exp_kernel(step, 0, q), NonConvergence);
}

TEST(Poisson, MatchesHighPrecisionReference) {
  for (const auto& c : kPoissonCases) {
    const auto p = poisson_integrals(c.x, c.y, c.r, defaults());
    SCOPED_TRACE(testing::Message() << "x=" << c.x << " y=" << c.y << " r=" << c.r);
    EXPECT_LT(rel(p.f0, c.f0), 1e-10);
    EXPECT_LT(rel(p.f1, c.f1), 1e-9);
    EXPECT_LT(rel(p.g0, c.g0), 1e-9);
    EXPECT_LT(rel(p.g1, c.g1), 1e-8);
  }
}

TEST(Poisson, InputValidation) {
  EXPECT_THROW(poisson_integrals(1.0, 0.0, 1, defaults()), InvalidInput);
  EXPECT_THROW(poisson_integrals(1.0, -1.0, 1, defaults()), InvalidInput);
  EXPECT_THROW(poisson_integrals(1.0, 1.0, 3, defaults()), InvalidInput);
}

TEST(EvalF, LargeHeightBound) {
  const double v = eval_F(0.0, 1e3, defaults());
  EXPECT_LE(v, 1e-6);
  EXPECT_GT(v, 0.0);
}

TEST(EvalF, ApproachesNegativeAxis) {
  EXPECT_NEAR(eval_F(-1.0, 1e-6, defaults()), 0.19269472464638926, 1e-9);
}

TEST(EvalF, RequiresPositiveHeight) { EXPECT_THROW(eval_F(1.0, 0.0, defaults()), InvalidInput); }

TEST(EvalF, StrictlyDecreasingInHeightAndBoundedByInverseSquare) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-5.0, 40.0);
  std::uniform_real_distribution<double> ly(-8.0, 2.0);
  for (int i = 0; i < 60; ++i) {
    const double x = ux(rng);
    double y1 = std::pow(10.0, ly(rng));
    double y2 = std::pow(10.0, ly(rng));
    if (y1 > y2) std::swap(y1, y2);
    if (y2 / y1 < 1.0 + 1e-6) continue;
    const double f1 = eval_F(x, y1, defaults());
    const double f2 = eval_F(x, y2, defaults());
    EXPECT_GT(f1, f2) << x << " " << y1 << " " << y2;
    EXPECT_LE(f1, 1.0 / (y1 * y1));
    EXPECT_LE(f2, 1.0 / (y2 * y2));
  }
}

TEST(NegativeAxis, Examples) {
  EXPECT_NEAR(eval_F_negative_axis(1.0, defaults()), 0.19269472464638926, 1e-14);
  EXPECT_LT(eval_F_negative_axis(1e3, defaults()), 1e-5);
  EXPECT_GT(eval_F_negative_axis(1e-6, defaults()), 10.0);
  EXPECT_THROW(eval_F_negative_axis(0.0, defaults()), InvalidInput);
}

TEST(NegativeAxis, ClosedFormAgreesWithQuadratureOnLogGrid) {
  const auto q = defaults();
  for (int k = 0; k <= 28; ++k) {
    const double c = std::pow(10.0, -4.0 + 7.0 * k / 28.0);
    const double closed = F_negative_axis_closed_form(std::log(c));
    const double quad = poisson_integrals(-c, 0.0, 1, q, kF0).f0;
    EXPECT_LE(std::abs(closed - quad), 10.0 * q.abs_tol) << "c=" << c;
  }
}

TEST(NegativeAxis, StrictlyDecreasing) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lc(-4.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    double a = std::pow(10.0, lc(rng));
    double b = std::pow(10.0, lc(rng));
    if (a > b) std::swap(a, b);
    if (b / a < 1.0 + 1e-9) continue;
    EXPECT_GT(eval_F_negative_axis(a, defaults()), eval_F_negative_axis(b, defaults()));
  }
}
