#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "fractrans/config.hpp"
#include "fractrans/sections.hpp"
#include "fractrans/transform.hpp"

using namespace fractrans;

namespace {

Point2 diag(double t) { return {t, t}; }

IfsSystem line_pair(double a, double b) {
  return IfsSystem({AffineMap2(a, 0, 0, a, 0, 0), AffineMap2(b, 0, 0, b, 1 - b, 1 - b)}, std::max(a, b));
}

}  // namespace

TEST(Classify, ClosedBelowOpenAbove) {
  const Mask m = threshold_mask_1d(0.6);
  EXPECT_EQ(classify(m, diag(0.6)), 1);
  EXPECT_EQ(classify(m, diag(0.600001)), 2);
}

TEST(Classify, QuadrantMaskExample) {
  EXPECT_EQ(classify(quadrant_mask(0.618), {0.5, 0.7}), 4);
  EXPECT_EQ(classify(quadrant_mask(0.618), {0.618, 0.618}), 1);
  EXPECT_EQ(classify(quadrant_mask(0.618), {0.7, 0.618}), 2);
  EXPECT_EQ(classify(quadrant_mask(0.618), {0.7, 0.7}), 3);
}

TEST(Classify, GapThrows) {
  const Mask m({Region::half_plane_x(0.4, Side::Below, true), Region::half_plane_x(0.6, Side::Above, false)});
  EXPECT_THROW(classify(m, {0.5, 0.5}), MaskGap);
  EXPECT_THROW(check_mask_coverage(line_pair(0.5, 0.5), m), MaskGap);
}

TEST(MaskedStep, TentBranches) {
  const IfsSystem tent = tent_system(0.5);
  const Mask m = tent_mask();
  const MaskedStep a = masked_step(tent, m, diag(0.25));
  EXPECT_EQ(a.symbol, 1);
  EXPECT_NEAR(a.point.x, 0.5, 1e-15);
  const MaskedStep b = masked_step(tent, m, diag(0.75));
  EXPECT_EQ(b.symbol, 2);
  EXPECT_NEAR(b.point.x, 0.5, 1e-15);
  const MaskedStep c = masked_step(tent, m, diag(0.0));
  EXPECT_EQ(c.symbol, 1);
  EXPECT_EQ(c.point, diag(0.0));
}

TEST(MaskedStep, LeavingTheDomainIsAnError) {
  // M2 = {x > 0.3} is not inside f2(A) = [0.5, 1] for this pair.
  const IfsSystem ifs = line_pair(0.5, 0.5);
  EXPECT_THROW(masked_step(ifs, threshold_mask_1d(0.3), diag(0.35)), OrbitEscape);
}

TEST(MaskedAddress, FixedPointGivesConstantAddress) {
  EXPECT_EQ(masked_address(h_system(0.6), quadrant_mask(0.6), {0, 0}, 12), Address(std::vector<int>(12, 1)));
}

TEST(MaskedAddress, BinaryExpansionPattern) {
  const Address a = masked_address(line_pair(0.5, 0.5), threshold_mask_1d(0.5), diag(0.3), 3);
  EXPECT_EQ(a, Address({1, 2, 1}));
}

TEST(MaskedAddress, TentOrbitEntersTrappingInterval) {
  const IfsSystem tent = tent_system(0.75);
  const Mask m = tent_mask();
  const double lo = (2 * 0.75 - 1) / (2 * 0.75 * 0.75), hi = 1 / (2 * 0.75);
  EXPECT_NEAR(lo, 4.0 / 9, 1e-15);
  EXPECT_NEAR(hi, 2.0 / 3, 1e-15);
  fixtures::Uniform u(5);
  for (int i = 0; i < 100; ++i) {
    Point2 p = diag(u.in(0.001, 0.999));
    for (int k = 1; k <= 300; ++k) {
      p = masked_step(tent, m, p).point;
      if (k > 200) {
        EXPECT_GE(p.x, lo);
        EXPECT_LE(p.x, hi);
      }
    }
  }
}

TEST(MaskedAddress, PrefixStopsAtGap) {
  const Mask m({Region::half_plane_x(0.4, Side::Below, true), Region::half_plane_x(0.6, Side::Above, false)});
  EXPECT_TRUE(masked_address_prefix(line_pair(0.5, 0.5), m, diag(0.5), 5).empty());
  EXPECT_EQ(masked_address_prefix(line_pair(0.5, 0.5), m, diag(0.25), 5).size(), 1u);  // 0.25 -> 0.5 is a gap
}

TEST(TopsMask, QuadrantTilesGivePriorityToLowerIndex) {
  const IfsSystem h = h_system(0.5);
  const Mask m = tops_mask(h, image_tiles(h));
  EXPECT_EQ(classify(m, {0.5, 0.5}), 1);
  EXPECT_EQ(classify(m, {0.5, 0.25}), 1);
  EXPECT_EQ(classify(m, {0.75, 0.5}), 2);
  EXPECT_EQ(classify(m, {0.5, 0.75}), 3);
  EXPECT_EQ(classify(m, {0.25, 0.75}), 4);
  EXPECT_EQ(classify(m, {0.75, 0.75}), 3);
}

TEST(TopsMask, OverlappingLinePair) {
  const IfsSystem g = line_pair(2.0 / 3, 0.5);
  const Mask m = tops_mask(g, {Region::box({0, 2.0 / 3}, {0, 2.0 / 3}), Region::box({0.5, 1}, {0.5, 1})});
  EXPECT_EQ(classify(m, diag(2.0 / 3)), 1);
  EXPECT_EQ(classify(m, diag(0.6)), 1);
  EXPECT_EQ(classify(m, diag(0.67)), 2);
}

TEST(TopsMask, DuplicateTileIsNeverChosen) {
  const IfsSystem g = line_pair(0.5, 0.5);
  const Region whole = Region::box({0, 1}, {0, 1});
  const Mask m = tops_mask(g, {whole, whole});
  fixtures::Uniform u(3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(classify(m, u.point()), 1);
}

TEST(ValidateMask, RejectsOverlapAndSubsetViolations) {
  const IfsSystem g = line_pair(0.5, 0.5);
  const Mask overlap({Region::half_plane_x(0.55, Side::Below, true), Region::half_plane_x(0.45, Side::Above, true)});
  EXPECT_THROW(validate_mask(g, overlap), InvalidArgument);
  EXPECT_THROW(validate_mask(hrs_system(2.0 / 3, 0.5), quadrant_mask(0.45)), InvalidArgument);
  EXPECT_NO_THROW(validate_mask(hrs_system(2.0 / 3, 0.5), quadrant_mask(0.618)));
  EXPECT_NO_THROW(validate_mask(h_system(0.6), quadrant_mask(0.6)));
}

TEST(SectionsProperty, AddressMatchesIndependentOracle) {
  fixtures::Uniform u(17);
  for (int i = 0; i < 2000; ++i) {
    const Point2 p = u.point();
    EXPECT_EQ(fixtures::symbols(masked_address(hrs_system(2.0 / 3, 0.5), quadrant_mask(0.618), p, 20)),
              fixtures::hrs_quadrant_address(2.0 / 3, 0.5, 0.618, p, 20));
  }
}

TEST(SectionsProperty, SectionIdentity) {
  const IfsSystem h = h_system(0.6);
  const Mask m = quadrant_mask(0.6);
  const int k = recommended_depth(h, 1.0 / 1024);
  fixtures::Uniform u(19);
  for (int i = 0; i < 10000; ++i) {
    const Point2 p = u.point();
    const Point2 q = coding_point(h, masked_address(h, m, p, k), h.domain().center());
    EXPECT_LE(std::abs(q.x - p.x), h.depth_error_bound(k) + 1e-9);
    EXPECT_LE(std::abs(q.y - p.y), h.depth_error_bound(k) + 1e-9);
  }
}

TEST(SectionsProperty, ShiftCommutesWithMaskedStep) {
  const IfsSystem h = hrs_system(2.0 / 3, 0.5);
  const Mask m = quadrant_mask(0.618);
  fixtures::Uniform u(23);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p = u.point();
    EXPECT_EQ(shift(masked_address(h, m, p, 20)), masked_address(h, m, masked_step(h, m, p).point, 19));
  }
}

TEST(SectionsProperty, EqualAddressesMeanNearbyPoints) {
  const IfsSystem h = h_system(0.6);
  const Mask m = quadrant_mask(0.6);
  const int k = 6;
  fixtures::Uniform u(29);
  int equal = 0;
  for (int i = 0; i < 20000; ++i) {
    const Point2 p = u.point(), q = u.point();
    if (masked_address(h, m, p, k) == masked_address(h, m, q, k)) {
      ++equal;
      EXPECT_LE(distance(p, q), h.depth_error_bound(k));
    }
  }
  EXPECT_GT(equal, 0);
}

TEST(SectionsProperty, CantorTopsAttainsEveryAddress) {
  const IfsSystem c({AffineMap2(1.0 / 3, 0, 0, 1.0 / 3, 0, 0), AffineMap2(1.0 / 3, 0, 0, 1.0 / 3, 2.0 / 3, 2.0 / 3)},
                    1.0 / 3);
  const Mask m = tops_mask(c, image_tiles(c));
  std::set<std::vector<int>> seen;
  for (int bits = 0; bits < 256; ++bits) {
    std::vector<int> s(8);
    for (int k = 0; k < 8; ++k) s[k] = 1 + ((bits >> k) & 1);
    // Pad with a long tail so the point sits deep inside its level-8 cell.
    std::vector<int> deep = s;
    deep.resize(40, 1);
    const Point2 p = coding_point(c, Address(deep), {0, 0});
    const auto got = fixtures::symbols(masked_address(c, m, p, 8));
    EXPECT_EQ(got, s);
    seen.insert(got);
  }
  EXPECT_EQ(seen.size(), 256u);
}
