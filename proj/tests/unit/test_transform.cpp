#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fractrans/transform.hpp"

using namespace fractrans;

namespace {

IfsSystem line_pair(double a, double b) {
  return IfsSystem({AffineMap2(a, 0, 0, a, 0, 0), AffineMap2(b, 0, 0, b, 1 - b, 1 - b)}, std::max(a, b));
}

double p_star_1024() {
  static const double p = compute_p_star(2.0 / 3, 0.5, 1024, 40);
  return p;
}

double round_trip_fraction(const HomeoPair& pair, int n, std::uint64_t seed) {
  fixtures::Uniform u(seed);
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    const Point2 p = u.point();
    const Point2 q = transform_point(pair.backward, transform_point(pair.forward, p));
    ok += distance(p, q) <= 3.0 / 512 ? 1 : 0;
  }
  return static_cast<double>(ok) / n;
}

}  // namespace

TEST(TransformPoint, SameSystemIsIdentityWithinDepthBound) {
  const SectionSystem s(h_system(0.6), quadrant_mask(0.6));
  const FractalTransform t(s, h_system(0.6));
  fixtures::Uniform u(1);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p = u.point();
    EXPECT_LE(distance(transform_point(t, p), p), h_system(0.6).depth_error_bound(s.depth()) + 1e-12);
  }
}

TEST(TransformPoint, LenaPairFixesOrigin) {
  const HomeoPair pair = make_hrs_pair(0.5, 0.5, 0.6, 0.4, 0.5);
  const Point2 q = transform_point(pair.forward, {0, 0});
  EXPECT_LE(q.x, std::pow(0.6, pair.forward.source().depth()));
  EXPECT_LE(q.y, std::pow(0.6, pair.forward.source().depth()));
}

TEST(TransformPoint, LenaPairCentreMatchesOracle) {
  const HomeoPair pair = make_hrs_pair(0.5, 0.5, 0.6, 0.4, 0.5);
  const int k = pair.forward.source().depth();
  const auto addr = fixtures::hrs_quadrant_address(0.5, 0.5, 0.5, {0.5, 0.5}, k);
  ASSERT_EQ(addr.front(), 1);
  const Point2 want = fixtures::hrs_coding_point(0.6, 0.4, addr, {0.5, 0.5});
  const Point2 got = transform_point(pair.forward, {0.5, 0.5});
  EXPECT_NEAR(got.x, want.x, 1e-12);
  EXPECT_NEAR(got.y, want.y, 1e-12);
  // Deeper brute-force composition agrees to the truncation bound.
  const Point2 deep =
      fixtures::hrs_coding_point(0.6, 0.4, fixtures::hrs_quadrant_address(0.5, 0.5, 0.5, {0.5, 0.5}, 20), {0.5, 0.5});
  EXPECT_LE(distance(got, deep), 2 * h_system(0.6).depth_error_bound(k));
  // The point (1/2, 1/2) is the top-right corner of tile 1, so it lands on g1's corner (0.6, 0.6).
  EXPECT_NEAR(got.x, 0.6, 1e-3);
  EXPECT_NEAR(got.y, 0.6, 1e-3);
}

TEST(MakeHrsPair, ChecksParameters) {
  EXPECT_THROW(make_hrs_pair(0.5, 0.5, 0.6, 0.4, 0.55), InvalidArgument);
  EXPECT_THROW(make_hrs_pair(1.2, 0.5, 0.6, 0.4, 0.5), InvalidArgument);
  EXPECT_NO_THROW(make_hrs_pair(2.0 / 3, 0.5, 0.5, 2.0 / 3, 0.618));
}

TEST(MakeHrsPair, EqualSystemsGiveIdentity) {
  const HomeoPair pair = make_hrs_pair(0.5, 0.5, 0.5, 0.5, 0.5);
  fixtures::Uniform u(2);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p = u.point();
    EXPECT_LE(distance(transform_point(pair.forward, p), p), 1.0 / 1024);
  }
}

TEST(TransformRaster, IdentityIsNearestResample) {
  const Picture src = fixtures::synthetic_photo(64);
  const HomeoPair pair = make_hrs_pair(0.5, 0.5, 0.5, 0.5, 0.5);
  EXPECT_EQ(transform_raster(pair.backward, src, 64), src);
  // Upsampling keeps every sample 1/256 away from a source pixel edge.
  EXPECT_EQ(transform_raster(pair.backward, src, 128), resample_nearest(src, 128, 128));
}

TEST(TransformRaster, ConstantStaysConstant) {
  const Picture red(48, 48, {200, 10, 10, 255});
  const HomeoPair pair = make_hrs_pair(0.5, 0.5, 0.6, 0.4, 0.5);
  EXPECT_EQ(apply_homeomorphism(pair, red, 40), Picture(40, 40, {200, 10, 10, 255}));
  EXPECT_EQ(splat_raster(pair.forward, red, 40), Picture(40, 40, {200, 10, 10, 255}));
}

TEST(PStar, Examples) {
  EXPECT_DOUBLE_EQ(compute_p_star(0.5, 0.5, 512, 30), 0.5);
  const double p = p_star_1024();
  EXPECT_GE(p, 0.5);
  EXPECT_LE(p, 2.0 / 3);
  EXPECT_NEAR(p, 0.618, 0.01);
  EXPECT_THROW(compute_p_star(0.4, 0.5, 64, 10), InvalidArgument);
}

TEST(TransformProperty, LenaPairRoundTrip) {
  EXPECT_GE(round_trip_fraction(make_hrs_pair(0.5, 0.5, 0.6, 0.4, 0.5), 10000, 31), 0.99);
}

TEST(TransformProperty, GoldenPairRoundTrip) {
  EXPECT_GE(round_trip_fraction(make_hrs_pair(2.0 / 3, 0.5, 0.5, 2.0 / 3, p_star_1024()), 10000, 37), 0.95);
}

TEST(TransformProperty, LineTransformIsMonotone) {
  const double a = 2.0 / 3, b = 0.5, p = p_star_1024();
  const FractalTransform t(SectionSystem(line_pair(a, b), threshold_mask_1d(p)),
                           IfsSystem({AffineMap2(b, 0, 0, b, 0, 0), AffineMap2(a, 0, 0, a, 1 - a, 1 - a)}, a));
  const int n = 4096;
  double prev = -1.0;
  int violations = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double y = transform_point(t, {x, x}).x;
    if (y < prev - 1.0 / n) ++violations;
    prev = std::max(prev, y);
  }
  EXPECT_EQ(violations, 0);
  EXPECT_NEAR(transform_point(t, {0, 0}).x, 0.0, 1e-3);
  EXPECT_NEAR(transform_point(t, {1, 1}).x, 1.0, 1e-3);
}
