#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <type_traits>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/geometry.hpp"
#include "fractrans/ifs.hpp"
#include "fractrans/raster.hpp"
#include "fractrans/settings.hpp"

namespace fractrans {

enum class Axis { X, Y };
enum class Side { Below, Above };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double t) const {
    return (lo_closed ? t >= lo : t > lo) && (hi_closed ? t <= hi : t < hi);
  }
  bool operator==(const Interval&) const = default;
};

class Region;

namespace region {

/// {x <= t}, {x < t}, {x >= t} or {x > t} (or the same in y).
struct HalfPlane {
  Axis axis = Axis::X;
  double threshold = 0.5;
  Side side = Side::Below;
  bool closed = true;
  bool operator==(const HalfPlane&) const = default;
};

struct Box {
  Interval x;
  Interval y;
  bool operator==(const Box&) const = default;
};

/// The quadrilateral image of the unit square under a bilinear map.
struct Quad {
  BilinearMap2 map;
  bool operator==(const Quad&) const = default;
};

/// {x + y <= 1} (Below) or {x + y >= 1} (Above); `closed` includes the line.
struct Diagonal {
  Side side = Side::Below;
  bool closed = true;
  bool operator==(const Diagonal&) const = default;
};

struct Complement {
  std::vector<Region> inner;  // exactly one
  bool operator==(const Complement&) const;
};

struct Intersection {
  std::vector<Region> parts;
  bool operator==(const Intersection&) const;
};

struct Union {
  std::vector<Region> parts;
  bool operator==(const Union&) const;
};

}  // namespace region

// A subset of the plane with a total membership test.
class Region {
 public:
  using Node = std::variant<region::HalfPlane, region::Box, region::Quad, region::Diagonal,
                            region::Complement, region::Intersection, region::Union>;

  Region() : node_(region::Union{}) {}  // empty set
  template <typename T>
    requires std::is_constructible_v<Node, T&&> && (!std::is_same_v<std::decay_t<T>, Region>)
  Region(T&& node) : node_(std::forward<T>(node)) {}

  static Region half_plane_x(double t, Side side, bool closed) {
    return region::HalfPlane{Axis::X, t, side, closed};
  }
  static Region half_plane_y(double t, Side side, bool closed) {
    return region::HalfPlane{Axis::Y, t, side, closed};
  }
  static Region box(Interval x, Interval y) { return region::Box{x, y}; }
  static Region quad(const BilinearMap2& m) { return region::Quad{m}; }
  static Region diagonal(Side side, bool closed) { return region::Diagonal{side, closed}; }
  static Region complement(Region r) { return region::Complement{{std::move(r)}}; }
  static Region intersection(std::vector<Region> parts) { return region::Intersection{std::move(parts)}; }
  static Region union_of(std::vector<Region> parts) { return region::Union{std::move(parts)}; }

  bool contains(Point2 p) const {
    return std::visit([p](const auto& n) { return test(n, p); }, node_);
  }

  const Node& node() const { return node_; }
  bool operator==(const Region& other) const { return node_ == other.node_; }

 private:
  static bool test(const region::HalfPlane& h, Point2 p) {
    const double v = h.axis == Axis::X ? p.x : p.y;
    if (h.side == Side::Below) return h.closed ? v <= h.threshold : v < h.threshold;
    return h.closed ? v >= h.threshold : v > h.threshold;
  }
  static bool test(const region::Box& b, Point2 p) { return b.x.contains(p.x) && b.y.contains(p.y); }
  static bool test(const region::Quad& q, Point2 p) { return q.map.try_invert(p).has_value(); }
  static bool test(const region::Diagonal& d, Point2 p) {
    const double s = p.x + p.y;
    if (d.side == Side::Below) return d.closed ? s <= 1.0 : s < 1.0;
    return d.closed ? s >= 1.0 : s > 1.0;
  }
  static bool test(const region::Complement& c, Point2 p) { return !c.inner.at(0).contains(p); }
  static bool test(const region::Intersection& i, Point2 p) {
    for (const auto& r : i.parts)
      if (!r.contains(p)) return false;
    return true;
  }
  static bool test(const region::Union& u, Point2 p) {
    for (const auto& r : u.parts)
      if (r.contains(p)) return true;
    return false;
  }

  Node node_;
};

namespace region {
inline bool Complement::operator==(const Complement& o) const { return inner == o.inner; }
inline bool Intersection::operator==(const Intersection& o) const { return parts == o.parts; }
inline bool Union::operator==(const Union& o) const { return parts == o.parts; }
}  // namespace region

// Ordered regions M_1..M_N. Region i decides when the orbit follows f_i^{-1}.
class Mask {
 public:
  Mask() = default;
  explicit Mask(std::vector<Region> regions) : regions_(std::move(regions)) {
    if (regions_.empty()) throw InvalidArgument("a mask needs at least one region");
  }

  std::size_t size() const { return regions_.size(); }
  const Region& region(int symbol) const { return regions_.at(static_cast<std::size_t>(symbol - 1)); }
  const std::vector<Region>& regions() const { return regions_; }

  std::optional<int> try_classify(Point2 p) const {
    for (std::size_t i = 0; i < regions_.size(); ++i)
      if (regions_[i].contains(p)) return static_cast<int>(i) + 1;
    return std::nullopt;
  }

  bool operator==(const Mask&) const = default;

 private:
  std::vector<Region> regions_;
};

/// Symbol of the region containing p. Disjointness is checked when a mask is
/// validated, so the first match is the only one.
inline int classify(const Mask& mask, Point2 p) {
  if (auto s = mask.try_classify(p)) return *s;
  throw MaskGap("no mask region contains (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
}

/// Two-sided thresholds {v <= p} / {v > p} on one coordinate.
inline Mask threshold_mask_1d(double p, Axis axis = Axis::X) {
  return Mask({Region(region::HalfPlane{axis, p, Side::Below, true}),
               Region(region::HalfPlane{axis, p, Side::Above, false})});
}

/// Quadrant mask: M1 = {x <= p, y <= p}, M2 = {x > p, y <= p},
/// M3 = {x > p, y > p}, M4 = {x <= p, y > p}.
inline Mask quadrant_mask(double p) {
  const Region left = Region::half_plane_x(p, Side::Below, true);
  const Region right = Region::half_plane_x(p, Side::Above, false);
  const Region low = Region::half_plane_y(p, Side::Below, true);
  const Region high = Region::half_plane_y(p, Side::Above, false);
  return Mask({Region::intersection({left, low}), Region::intersection({right, low}),
               Region::intersection({right, high}), Region::intersection({left, high})});
}

struct MaskedStep {
  int symbol = 0;
  Point2 point;
};

/// One step of the masked dynamical system: (i, f_i^{-1}(p)) with p in M_i.
inline MaskedStep masked_step(const IfsSystem& ifs, const Mask& mask, Point2 p) {
  const int s = classify(mask, p);
  Point2 q = invert(ifs.map(s), p);
  if (!ifs.domain().contains(q)) {
    if (!ifs.domain().contains(q, tolerances().domain_clamp))
      throw OrbitEscape("inverse branch " + std::to_string(s) + " leaves the domain at (" +
                        std::to_string(q.x) + ", " + std::to_string(q.y) + ")");
    q = ifs.domain().clamp(q);
  }
  return {s, q};
}

namespace detail {
inline std::optional<MaskedStep> try_masked_step(const IfsSystem& ifs, const Mask& mask, Point2 p) {
  const auto s = mask.try_classify(p);
  if (!s) return std::nullopt;
  const auto q = try_invert(ifs.map(*s), p);
  if (!q || !ifs.domain().contains(*q, tolerances().domain_clamp)) return std::nullopt;
  return MaskedStep{*s, ifs.domain().clamp(*q)};
}
}  // namespace detail

/// sigma_1..sigma_K emitted by the masked orbit of p.
inline Address masked_address(const IfsSystem& ifs, const Mask& mask, Point2 p, int depth) {
  if (depth < 0) throw InvalidArgument("depth must be nonnegative");
  Address addr;
  addr.reserve(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k) {
    const MaskedStep step = masked_step(ifs, mask, p);
    addr.push_back(step.symbol);
    p = step.point;
  }
  return addr;
}

/// Like masked_address, but stops (without throwing) at the first step whose
/// point no region contains or whose inverse branch is unavailable.
inline Address masked_address_prefix(const IfsSystem& ifs, const Mask& mask, Point2 p, int depth) {
  Address addr;
  addr.reserve(static_cast<std::size_t>(std::max(depth, 0)));
  for (int k = 0; k < depth; ++k) {
    const auto step = detail::try_masked_step(ifs, mask, p);
    if (!step) break;
    addr.push_back(step->symbol);
    p = step->point;
  }
  return addr;
}

// Grid used to spot-check masks: test points and the attractor raster.
inline constexpr int kMaskCheckResolution = 256;
inline constexpr int kMaskCheckIterations = 12;

/// Set iterations for the check raster: at least 12, and enough for the
/// contraction bound to shrink the domain below half a cell.
inline int mask_check_iterations(const IfsSystem& ifs) {
  const double cell = std::min(ifs.domain().width(), ifs.domain().height()) / kMaskCheckResolution;
  return std::max(kMaskCheckIterations, recommended_depth(ifs, 0.5 * cell));
}

namespace detail {

// Points f_i(c) for every cell centre c of the round K-1 raster: exactly the
// points that populate the round K raster, all within lipschitz^K * diam of A.
inline std::vector<std::pair<int, Point2>> attractor_samples(const IfsSystem& ifs,
                                                            const OccupancyGrid& previous) {
  std::vector<std::pair<int, Point2>> out;
  const int n = previous.width();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      if (!previous(ix, iy)) continue;
      const Point2 c = cell_center(ifs.domain(), n, n, {ix, iy});
      for (std::size_t m = 0; m < ifs.size(); ++m) {
        Point2 q;
        try {
          q = apply(ifs.maps()[m], c);
        } catch (const DegenerateDenominator&) {
          continue;
        }
        if (ifs.domain().contains(q, tolerances().domain_clamp))
          out.emplace_back(static_cast<int>(m) + 1, q);
      }
    }
  return out;
}

inline OccupancyGrid dilate(const OccupancyGrid& g, int radius) {
  OccupancyGrid out = g;
  for (int r = 0; r < radius; ++r) out = fractrans::dilate(out);
  return out;
}

}  // namespace detail

/// Every attractor sample lies in some region; throws MaskGap otherwise.
inline void check_mask_coverage(const IfsSystem& ifs, const Mask& mask) {
  if (mask.size() != ifs.size())
    throw InvalidArgument("mask has " + std::to_string(mask.size()) + " regions for " +
                          std::to_string(ifs.size()) + " maps");
  const auto previous = attractor_deterministic(ifs, mask_check_iterations(ifs) - 1, kMaskCheckResolution);
  for (const auto& [m, q] : detail::attractor_samples(ifs, previous))
    if (!mask.try_classify(q))
      throw MaskGap("mask leaves attractor point (" + std::to_string(q.x) + ", " +
                    std::to_string(q.y) + ") uncovered");
}

/// Grid spot-check of the mask conditions: regions pairwise disjoint on a
/// 256x256 grid, covering the attractor, and M_i inside f_i(A).
inline void validate_mask(const IfsSystem& ifs, const Mask& mask) {
  check_mask_coverage(ifs, mask);
  const int n = kMaskCheckResolution;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const Point2 p = cell_center(ifs.domain(), n, n, {ix, iy});
      int hits = 0;
      for (const auto& r : mask.regions()) hits += r.contains(p) ? 1 : 0;
      if (hits > 1)
        throw InvalidArgument("mask regions overlap at (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ")");
    }

  // A preimage f_i^{-1}(q) of a sample in M_i must land near the attractor;
  // the slack covers cell-centre rounding magnified by the inverse branch.
  const auto previous = attractor_deterministic(ifs, mask_check_iterations(ifs) - 1, n);
  const auto current = attractor_deterministic(ifs, mask_check_iterations(ifs), n);
  const int radius = static_cast<int>(std::ceil(0.71 / ifs.lipschitz_bound())) + 1;
  const auto near_attractor = detail::dilate(current, radius);
  for (const auto& [m, q] : detail::attractor_samples(ifs, previous)) {
    const int s = classify(mask, q);
    const auto pre = try_invert(ifs.map(s), q);
    const auto cell = pre ? cell_of(ifs.domain(), n, n, *pre) : std::nullopt;
    if (!cell || !near_attractor[*cell])
      throw InvalidArgument("mask region " + std::to_string(s) + " is not inside f_" +
                            std::to_string(s) + "(A) near (" + std::to_string(q.x) + ", " +
                            std::to_string(q.y) + ")");
  }
}

/// Tops mask: M_i = tiles[i] minus the union of tiles[j], j < i.
inline Mask tops_mask(const IfsSystem& ifs, const std::vector<Region>& tiles, bool check_coverage = true) {
  if (tiles.size() != ifs.size())
    throw InvalidArgument("tops mask needs one tile per map");
  std::vector<Region> regions;
  regions.reserve(tiles.size());
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (i == 0) {
      regions.push_back(tiles[0]);
      continue;
    }
    std::vector<Region> earlier(tiles.begin(), tiles.begin() + static_cast<std::ptrdiff_t>(i));
    regions.push_back(Region::intersection({tiles[i], Region::complement(Region::union_of(earlier))}));
  }
  Mask mask(std::move(regions));
  if (check_coverage) check_mask_coverage(ifs, mask);
  return mask;
}

/// Tiles f_i(domain) for systems whose maps send rectangles to quadrilaterals
/// (affine and projective maps, and bilinear maps of the unit square).
inline std::vector<Region> image_tiles(const IfsSystem& ifs) {
  const Rect& d = ifs.domain();
  std::vector<Region> tiles;
  for (const auto& m : ifs.maps()) {
    const Point2 a = apply(m, {d.xmin, d.ymin}), b = apply(m, {d.xmax, d.ymin});
    const Point2 c = apply(m, {d.xmax, d.ymax}), e = apply(m, {d.xmin, d.ymax});
    tiles.push_back(Region::quad(BilinearMap2(a, b, c, e)));
  }
  return tiles;
}

}  // namespace fractrans
