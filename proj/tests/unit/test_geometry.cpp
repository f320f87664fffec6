#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "fractrans/geometry.hpp"

using namespace fractrans;

namespace {

const BilinearMap2 kSkewQuad({0, 0}, {0.6, 0.1}, {1, 1}, {0.1, 0.6});

ProjectiveMap2 table_row_2() { return {0.2, 4.4, 7.5, -0.3, -4.4, -10.4, 0.2, 8.8, 15.4}; }

}  // namespace

TEST(Geometry, AffineHalvingSendsCornerToCentre) {
  const AffineMap2 m(0.5, 0, 0, 0.5, 0, 0);
  EXPECT_EQ(m.apply({1, 1}), (Point2{0.5, 0.5}));
  EXPECT_EQ(m.invert({0.5, 0.5}), (Point2{1, 1}));
}

TEST(Geometry, IdentityQuadIsIdentity) {
  const BilinearMap2 id({0, 0}, {1, 0}, {1, 1}, {0, 1});
  fixtures::Uniform u(1);
  for (int i = 0; i < 100; ++i) {
    const Point2 p = u.point();
    EXPECT_EQ(id.apply(p), p);
  }
  const Point2 q = id.invert({0.3, 0.7});
  EXPECT_NEAR(q.x, 0.3, 1e-15);
  EXPECT_NEAR(q.y, 0.7, 1e-15);
}

TEST(Geometry, ProjectiveTableRowAtOrigin) {
  const Point2 p = table_row_2().apply({0, 0});
  EXPECT_DOUBLE_EQ(p.x, 7.5 / 15.4);
  EXPECT_DOUBLE_EQ(p.y, -10.4 / 15.4);
  EXPECT_NEAR(p.x, 0.48701, 1e-5);
  EXPECT_NEAR(p.y, -0.67532, 1e-5);
}

TEST(Geometry, ProjectiveVanishingDenominatorThrows) {
  // w = x + y - 1 vanishes on the anti-diagonal.
  const ProjectiveMap2 m(1, 0, 0, 0, 1, 0, 1, 1, -1);
  EXPECT_THROW(m.apply({0.5, 0.5}), DegenerateDenominator);
  EXPECT_NO_THROW(m.apply({0.2, 0.2}));
}

TEST(Geometry, SingularMapsAreRejected) {
  EXPECT_THROW(AffineMap2(1, 2, 2, 4, 0, 0), InvalidArgument);
  EXPECT_THROW(ProjectiveMap2(1, 2, 3, 2, 4, 6, 0, 0, 1), InvalidArgument);
  EXPECT_THROW(BilinearMap2({0, 0}, {0.5, 0.5}, {1, 1}, {0, 1}), InvalidArgument);
}

TEST(Geometry, SkewQuadRoundTripExample) {
  const Point2 q = kSkewQuad.invert(kSkewQuad.apply({0.25, 0.75}));
  EXPECT_NEAR(q.x, 0.25, 1e-10);
  EXPECT_NEAR(q.y, 0.75, 1e-10);
}

TEST(Geometry, PointOutsideQuadIsNotInvertible) {
  EXPECT_FALSE(kSkewQuad.try_invert({0.9, 0.05}).has_value());
  EXPECT_THROW(kSkewQuad.invert({0.9, 0.05}), NotInvertibleHere);
}

TEST(GeometryProperty, RoundTripAllVariants) {
  const std::vector<MapVariant> maps{
      AffineMap2(0.3, -0.2, 0.1, 0.5, 0.2, 0.1),
      table_row_2(),
      ProjectiveMap2(19.05, 0.72, 1.86, -0.15, 16.9, -0.28, 5.63, 2.01, 20.0),
      kSkewQuad,
      BilinearMap2({0.1, 0.0}, {0.9, 0.2}, {0.7, 0.8}, {0.0, 1.0}),
      // Parallelogram: the quadratic degenerates to a linear equation.
      BilinearMap2({0, 0}, {0.5, 0.1}, {0.7, 0.6}, {0.2, 0.5}),
  };
  fixtures::Uniform u(7);
  for (const auto& m : maps) {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Point2 p{u.in(0.01, 0.99), u.in(0.01, 0.99)};
      const Point2 q = invert(m, apply(m, p));
      worst = std::max({worst, std::abs(q.x - p.x), std::abs(q.y - p.y)});
    }
    EXPECT_LE(worst, 1e-10) << map_kind(m);
  }
}

TEST(GeometryProperty, BilinearEdgesAreAffine) {
  const BilinearMap2 b({0.1, 0.0}, {0.9, 0.2}, {0.7, 0.8}, {0.0, 1.0});
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const Point2 got = b.apply({x, 0});
    const Point2 want = b.P + x * (b.Q - b.P);
    EXPECT_NEAR(got.x, want.x, 1e-12);
    EXPECT_NEAR(got.y, want.y, 1e-12);
  }
}

TEST(GeometryProperty, AffineCompositionMatchesNestedApplication) {
  const AffineMap2 m1(0.3, -0.2, 0.1, 0.5, 0.2, 0.1);
  const AffineMap2 m2(0.66, 0.1, -0.05, 0.34, 0.66, 0.0);
  const AffineMap2 c = compose(m1, m2);
  fixtures::Uniform u(3);
  for (int i = 0; i < 10000; ++i) {
    const Point2 p = u.point();
    const Point2 a = m1.apply(m2.apply(p)), b = c.apply(p);
    EXPECT_NEAR(a.x, b.x, 1e-12);
    EXPECT_NEAR(a.y, b.y, 1e-12);
  }
}
