#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/geometry.hpp"
#include "fractrans/ifs.hpp"
#include "fractrans/parallel.hpp"
#include "fractrans/picture.hpp"
#include "fractrans/raster.hpp"
#include "fractrans/sections.hpp"

namespace fractrans {

inline constexpr double kDefaultEpsilon = 1.0 / 1024.0;

// An IFS paired with a mask, i.e. a section tau_M of its coding map, truncated
// at a fixed depth.
class SectionSystem {
 public:
  SectionSystem(IfsSystem ifs, Mask mask, int depth = -1, bool validate = true)
      : ifs_(std::move(ifs)), mask_(std::move(mask)),
        depth_(depth < 0 ? recommended_depth(ifs_, kDefaultEpsilon) : depth) {
    if (mask_.size() != ifs_.size())
      throw InvalidArgument("mask and IFS disagree on the number of symbols");
    if (validate) validate_mask(ifs_, mask_);
  }

  const IfsSystem& ifs() const { return ifs_; }
  const Mask& mask() const { return mask_; }
  int depth() const { return depth_; }

  Address address(Point2 p) const { return masked_address(ifs_, mask_, p, depth_); }

 private:
  IfsSystem ifs_;
  Mask mask_;
  int depth_;
};

// T_FG = pi_G o tau_F.
class FractalTransform {
 public:
  FractalTransform(SectionSystem source, IfsSystem target)
      : source_(std::move(source)), target_(std::move(target)) {
    if (source_.ifs().size() != target_.size())
      throw InvalidArgument("source and target systems need the same number of maps");
  }

  const SectionSystem& source() const { return source_; }
  const IfsSystem& target() const { return target_; }

 private:
  SectionSystem source_;
  IfsSystem target_;
};

/// pi_G(tau_F(p)) at the source depth, seeded at the centre of G's domain.
inline Point2 transform_point(const FractalTransform& t, Point2 p) {
  const Address addr = t.source().address(p);
  if (addr.empty()) return t.target().domain().center();
  return coding_point(t.target(), addr, t.target().domain().center());
}

struct HomeoPair {
  FractalTransform forward;   // F -> G
  FractalTransform backward;  // G -> F
};

inline HomeoPair make_homeo_pair(const SectionSystem& f, const SectionSystem& g) {
  return {FractalTransform(f, g.ifs()), FractalTransform(g, f.ifs())};
}

/// Pull resampling: output pixel y (over pull.source's domain) takes the
/// nearest src colour at pull(y); src covers pull.target's domain. To push a
/// picture through T_FG, pass T_GF.
inline Picture transform_raster(const FractalTransform& pull, const Picture& src, int out_resolution) {
  Picture out(out_resolution, out_resolution);
  const Rect& out_domain = pull.source().ifs().domain();
  const Rect& src_domain = pull.target().domain();
  parallel_for(0, out_resolution, [&](int row) {
    for (int col = 0; col < out_resolution; ++col) {
      const Point2 y = out.pixel_center(col, row, out_domain);
      out.at(col, row) = src.sample(transform_point(pull, y), src_domain);
    }
  });
  return out;
}

namespace detail {

// Each unsettled pixel takes the most frequent colour among its voting 3x3
// neighbours (ties go to the colour seen first in row-major order).
inline Picture fill_holes(const Picture& pic, const std::vector<std::uint8_t>& settled,
                          const std::vector<std::uint8_t>& written) {
  Picture out = pic;
  const int w = pic.width(), h = pic.height();
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col) {
      if (settled[static_cast<std::size_t>(row) * w + col]) continue;
      std::vector<std::pair<Rgba, int>> votes;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const int r = row + dr, c = col + dc;
          if ((dr == 0 && dc == 0) || r < 0 || c < 0 || r >= h || c >= w) continue;
          if (!written[static_cast<std::size_t>(r) * w + c]) continue;
          const Rgba v = pic.at(c, r);
          auto it = std::find_if(votes.begin(), votes.end(), [&](const auto& e) { return e.first == v; });
          if (it == votes.end()) votes.emplace_back(v, 1);
          else ++it->second;
        }
      if (votes.empty()) continue;
      auto best = votes.begin();
      for (auto it = votes.begin(); it != votes.end(); ++it)
        if (it->second > best->second) best = it;
      out.at(col, row) = best->first;
    }
  return out;
}

// Output pixel hit by each supersampled source point, computed in parallel
// and returned in row-major sample order. -1 marks samples landing outside.
inline std::vector<long long> splat_targets(const FractalTransform& push, int src_w, int src_h,
                                            int out_resolution, int supersample) {
  const Rect& src_domain = push.source().ifs().domain();
  const Rect& out_domain = push.target().domain();
  const Picture out_shape(out_resolution, out_resolution);
  const long long per_row = static_cast<long long>(src_w) * supersample * supersample;
  std::vector<long long> targets(static_cast<std::size_t>(per_row) * src_h, -1);
  parallel_for(0, src_h, [&](int row) {
    std::size_t k = static_cast<std::size_t>(row) * static_cast<std::size_t>(per_row);
    for (int col = 0; col < src_w; ++col)
      for (int sy = 0; sy < supersample; ++sy)
        for (int sx = 0; sx < supersample; ++sx, ++k) {
          const Point2 x{src_domain.xmin + (col + (sx + 0.5) / supersample) / src_w * src_domain.width(),
                         src_domain.ymax - (row + (sy + 0.5) / supersample) / src_h * src_domain.height()};
          if (auto px = out_shape.pixel_of(transform_point(push, x), out_domain))
            targets[k] = static_cast<long long>(px->row) * out_resolution + px->col;
        }
  });
  return targets;
}

}  // namespace detail

inline constexpr int kDefaultSupersample = 4;

/// Forward splatting for transforms without an inverse partner: every
/// supersampled source point writes its colour at push(x); later samples win.
/// Holes are filled once by a 3x3 majority of written neighbours.
inline Picture splat_raster(const FractalTransform& push, const Picture& src, int out_resolution,
                            int supersample = kDefaultSupersample) {
  if (supersample < 1) throw InvalidArgument("supersample must be at least 1");
  const auto targets =
      detail::splat_targets(push, src.width(), src.height(), out_resolution, supersample);
  Picture out(out_resolution, out_resolution);
  std::vector<std::uint8_t> written(out.pixel_count(), 0);
  const std::size_t per_pixel = static_cast<std::size_t>(supersample) * supersample;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] < 0) continue;
    const std::size_t pix = k / per_pixel;
    const int col = static_cast<int>(pix % static_cast<std::size_t>(src.width()));
    const int row = static_cast<int>(pix / static_cast<std::size_t>(src.width()));
    out.pixels()[static_cast<std::size_t>(targets[k])] = src.at(col, row);
    written[static_cast<std::size_t>(targets[k])] = 1;
  }
  return detail::fill_holes(out, written, written);
}

/// The picture src o T_GF on G's domain, i.e. src carried forward by T_FG.
inline Picture apply_homeomorphism(const HomeoPair& pair, const Picture& src, int out_resolution) {
  return transform_raster(pair.backward, src, out_resolution);
}

/// H_{r,s}: h1 = (rx, ry), h2 = (sx + 1 - s, ry), h3 = (sx + 1 - s, sy + 1 - s),
/// h4 = (rx, sy + 1 - s) on the unit square.
inline IfsSystem hrs_system(double r, double s) {
  if (!(r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0))
    throw InvalidArgument("H_{r,s} needs r and s in (0, 1)");
  return IfsSystem({AffineMap2(r, 0, 0, r, 0, 0), AffineMap2(s, 0, 0, r, 1 - s, 0),
                    AffineMap2(s, 0, 0, s, 1 - s, 1 - s), AffineMap2(r, 0, 0, s, 0, 1 - s)},
                   std::max(r, s));
}

/// The non-overlapping family H_p = H_{p, 1-p}.
inline IfsSystem h_system(double p) { return hrs_system(p, 1.0 - p); }

/// F = H_{r1,s1}, G = H_{r2,s2} with quadrant masks. In the overlapping case
/// F is masked at p and G at 1 - p. When both systems tile the square
/// (r + s = 1) each mask sits on its own tile boundary, so p must equal r1.
/// Both directions share one depth.
inline HomeoPair make_hrs_pair(double r1, double s1, double r2, double s2, double p, int depth = -1) {
  const IfsSystem f = hrs_system(r1, s1);
  const IfsSystem g = hrs_system(r2, s2);
  double pf = p, pg = 1.0 - p;
  const bool tiling = std::abs(r1 + s1 - 1.0) < 1e-12 && std::abs(r2 + s2 - 1.0) < 1e-12;
  if (tiling) {
    if (std::abs(p - r1) > 1e-12)
      throw InvalidArgument("non-overlapping pair needs p = r1");
    pf = r1;
    pg = r2;
  } else if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("mask threshold must lie in (0, 1)");
  }
  const int k = depth >= 0 ? depth
                           : std::max(recommended_depth(f, kDefaultEpsilon),
                                      recommended_depth(g, kDefaultEpsilon));
  return make_homeo_pair(SectionSystem(f, quadrant_mask(pf), k), SectionSystem(g, quadrant_mask(pg), k));
}

/// The two-map system ((a x, b y), (b x + 1 - b, a y + 1 - a)) whose attractor
/// contains the repeller of the overlapping pair.
inline IfsSystem golden_system(double a, double b) {
  return IfsSystem({AffineMap2(a, 0, 0, b, 0, 0), AffineMap2(b, 0, 0, a, 1 - b, 1 - a)},
                   std::max(a, b));
}

/// Largest p in [1 - b, a] for which (p, 1 - p) meets the rasterised
/// attractor of golden_system(a, b). Cells the line crosses contribute their
/// centre; cells it only touches at a corner contribute that corner.
inline double compute_p_star(double a, double b, int resolution, int iterations) {
  if (!(a >= b && b > 0.0 && a + b >= 1.0 && a < 1.0))
    throw InvalidArgument("p* needs a >= b > 0, a + b >= 1, a < 1");
  const OccupancyGrid occ = attractor_deterministic(golden_system(a, b), iterations, resolution);
  const double lo = 1.0 - b, hi = a;
  const double n = resolution;
  std::optional<double> best;
  const auto consider = [&](double x) {
    if (x < lo - 0.5 / n || x > hi + 0.5 / n) return;
    x = std::clamp(x, lo, hi);
    if (!best || x > *best) best = x;
  };
  for (int ix = 0; ix < resolution; ++ix) {
    const int through = resolution - 1 - ix;  // the line x + y = 1 crosses this row
    if (occ(ix, through)) consider((ix + 0.5) / n);
    if (through - 1 >= 0 && occ(ix, through - 1)) consider((ix + 1) / n);
    if (through + 1 < resolution && occ(ix, through + 1)) consider(ix / n);
  }
  if (!best) throw NoIntersection("the anti-diagonal misses the attractor in [1-b, a]");
  return *best;
}

}  // namespace fractrans
