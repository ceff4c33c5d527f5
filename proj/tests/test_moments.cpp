#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "freegamma/moments.hpp"
#include "noncrossing.hpp"

using namespace freegamma;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Cumulants, Values) {
  EXPECT_EQ(free_cumulants(1.0, 4), (std::vector<double>{1, 1, 2, 6}));
  EXPECT_EQ(free_cumulants(2.0, 1)[0], 2.0);
  EXPECT_EQ(free_cumulants(0.5, 5)[4], 12.0);
  EXPECT_THROW(free_cumulants(1.0, 0), InvalidInput);
}

TEST(Recursion, LowOrders) {
  const auto m1 = moments_from_cumulants(free_cumulants(1.0, 3), 3);
  EXPECT_EQ(m1, (std::vector<double>{1, 2, 6}));
  for (double a : {0.3, 1.7, 4.0}) {
    const auto m = moments_from_cumulants(free_cumulants(a, 3), 3);
    EXPECT_NEAR(m[1], a + a * a, 1e-13 * m[1]);
    EXPECT_NEAR(m[2], 2 * a + 3 * a * a + a * a * a, 1e-13 * m[2]);
  }
  EXPECT_THROW(moments_from_cumulants({1.0, 1.0}, 3), InvalidInput);
}

TEST(Recursion, MatchesNonCrossingEnumeration) {
  // The enumeration counts only small integers when alpha is an integer, so
  // agreement there is exact.
  for (double a : {0.5, 1.0, 2.0}) {
    const auto m = moments_from_cumulants(free_cumulants(a, 8), 8);
    for (int p = 1; p <= 8; ++p) {
      const double oracle = freegamma_test::noncrossing_moment(p, a);
      if (a == std::floor(a)) EXPECT_EQ(m[p - 1], oracle) << a << " " << p;
      EXPECT_LT(rel(m[p - 1], oracle), 1e-12) << a << " " << p;
    }
  }
}

TEST(Sequence, Accessors) {
  const auto s = cumulant_moment_sequence(2.0, 4);
  EXPECT_EQ(s.order, 4);
  EXPECT_EQ(s.cumulant(3), 4.0);
  EXPECT_EQ(s.moment(2), 6.0);
  EXPECT_THROW(s.moment(5), std::out_of_range);
}

TEST(DensityMoments, AgreeWithRecursion) {
  for (double a : {0.5, 1.0, 2.0, 10.0}) {
    const auto ctx = make_context(a);
    const auto dm = moments_from_density(ctx, 6);
    const auto m = moments_from_cumulants(free_cumulants(a, 6), 6);
    EXPECT_NEAR(dm.mass, 1.0, 1e-6) << a;
    for (int p = 1; p <= 6; ++p) EXPECT_LT(rel(dm.m[p - 1], m[p - 1]), 1e-4) << a << " " << p;
    EXPECT_LT(rel(dm.m[1] - dm.m[0] * dm.m[0], a), 1e-4);
  }
  EXPECT_NEAR(moments_from_density(make_context(1.0), 1).m[0], 1.0, 1e-5);
  EXPECT_THROW(moments_from_density(make_context(1.0), 11), InvalidInput);
}

TEST(SmallAlpha, MomentRatios) {
  const auto r4 = small_alpha_moment_limit(1e-4, 4);
  EXPECT_EQ(r4[0], 1.0);
  EXPECT_GE(r4[2], 1.99);
  EXPECT_LE(r4[2], 2.01);
  const double limits[] = {1, 1, 2, 6};
  for (int p = 2; p <= 4; ++p) {
    double prev = 1e300;
    for (double a : {1e-2, 1e-3, 1e-4}) {
      const double d = small_alpha_moment_limit(a, 4)[p - 1] - limits[p - 1];
      EXPECT_GT(d, 0.0);
      EXPECT_LT(d, prev);
      prev = d;
    }
  }
  EXPECT_THROW(small_alpha_moment_limit(0.1, 3), InvalidInput);
}
