#pragma once

#include <cstdint>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/ifs.hpp"
#include "fractrans/parallel.hpp"
#include "fractrans/picture.hpp"
#include "fractrans/random.hpp"
#include "fractrans/sections.hpp"
#include "fractrans/transform.hpp"

namespace fractrans {

// ---------------------------------------------------------------------------
// Colour stealing
// ---------------------------------------------------------------------------

/// Paints the drawing attractor with colours read from palette_picture through
/// palette_ifs: colour(x) = palette(pi'(tau_M(x))). Pixels off the rasterised
/// attractor stay transparent. A pixel centre is generally not an attractor
/// point, so its masked orbit may leave the mask's cover before the full
/// depth; the address is then the prefix computed so far (a pixel whose first
/// step is uncovered stays transparent).
inline Picture color_steal(const SectionSystem& drawing, const IfsSystem& palette_ifs,
                           const Picture& palette_picture, int out_resolution,
                           int attractor_iterations = -1) {
  if (drawing.ifs().size() != palette_ifs.size())
    throw InvalidArgument("drawing and palette systems need the same number of maps");
  const Rect& domain = drawing.ifs().domain();
  if (attractor_iterations < 1) {
    const double cell = std::min(domain.width(), domain.height()) / out_resolution;
    attractor_iterations = std::max(1, recommended_depth(drawing.ifs(), cell));
  }
  const OccupancyGrid support = attractor_deterministic(drawing.ifs(), attractor_iterations, out_resolution);
  Picture out(out_resolution, out_resolution);
  const Point2 seed = palette_ifs.domain().center();
  parallel_for(0, out_resolution, [&](int row) {
    for (int col = 0; col < out_resolution; ++col) {
      if (!support(col, out_resolution - 1 - row)) continue;
      const Point2 x = out.pixel_center(col, row, domain);
      const Address addr = masked_address_prefix(drawing.ifs(), drawing.mask(), x, drawing.depth());
      if (addr.empty()) continue;
      out.at(col, row) = palette_picture.sample(coding_point(palette_ifs, addr, seed), palette_ifs.domain());
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Fractal filter
// ---------------------------------------------------------------------------

/// T_GF o P o T_FG applied to img: carry img to G's domain at grid_resolution
/// (the projection onto the coarse pixel lattice), then carry it back at the
/// original resolution.
inline Picture fractal_filter(const Picture& img, const HomeoPair& pair, int grid_resolution) {
  if (img.width() != img.height()) throw InvalidArgument("fractal filter needs a square picture");
  if (grid_resolution < 1 || grid_resolution > img.width())
    throw InvalidArgument("grid resolution must lie in [1, picture resolution]");
  const Picture middle = transform_raster(pair.backward, img, grid_resolution);
  return transform_raster(pair.forward, middle, img.width());
}

// ---------------------------------------------------------------------------
// Masked packing
// ---------------------------------------------------------------------------

/// F = ((y, 0.6(1 - x)), (y, 0.4 + 0.6x)): the overlapping packing system. One
/// step swaps the axes, two steps contract both by 0.6; 0.8 is the asserted
/// per-step bound.
inline IfsSystem packing_source_system() {
  return IfsSystem({AffineMap2(0, 1, -0.6, 0, 0, 0.6), AffineMap2(0, 1, 0.6, 0, 0, 0.4)}, 0.8);
}

/// G = ((y, 0.5(1 - x)), (y, 0.5 + 0.5x)): the tiling carrier system.
inline IfsSystem packing_carrier_system() {
  return IfsSystem({AffineMap2(0, 1, -0.5, 0, 0, 0.5), AffineMap2(0, 1, 0.5, 0, 0, 0.5)}, 0.75);
}

/// M1 = {y <= p}, M2 = {y > p}. The two images f_i(square) overlap in the band
/// 0.4 <= y <= 0.6, so the threshold is taken on y.
inline Mask packing_mask(double p) { return threshold_mask_1d(p, Axis::Y); }

inline FractalTransform packing_transform(const IfsSystem& f_template, const IfsSystem& g, double p,
                                          int depth = -1) {
  return FractalTransform(SectionSystem(f_template, packing_mask(p), depth), g);
}

struct PackSource {
  Picture picture;
  double threshold = 0.5;
};

struct PackResult {
  Picture picture;
  std::size_t written = 0;     // pixels claimed by exactly one source
  std::size_t collisions = 0;  // pixels claimed by two sources (white)
  std::size_t filled = 0;      // holes filled from neighbours
};

/// Splats each source through T^(p_j)_FG into one picture. A pixel claimed by
/// two different sources turns white and stays white.
inline PackResult pack_masked(const std::vector<PackSource>& sources, const IfsSystem& f_template,
                              const IfsSystem& g, int out_resolution,
                              int supersample = kDefaultSupersample, int depth = -1) {
  if (sources.empty()) throw InvalidArgument("nothing to pack");
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t j = i + 1; j < sources.size(); ++j)
      if (sources[i].threshold == sources[j].threshold)
        throw InvalidArgument("packing thresholds must be distinct");
  if (supersample < 1) throw InvalidArgument("supersample must be at least 1");

  constexpr int kNone = -1, kCollision = -2;
  Picture out(out_resolution, out_resolution);
  std::vector<int> owner(out.pixel_count(), kNone);
  const std::size_t per_pixel = static_cast<std::size_t>(supersample) * supersample;
  for (std::size_t j = 0; j < sources.size(); ++j) {
    const Picture& src = sources[j].picture;
    const FractalTransform t = packing_transform(f_template, g, sources[j].threshold, depth);
    const auto targets = detail::splat_targets(t, src.width(), src.height(), out_resolution, supersample);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (targets[k] < 0) continue;
      const auto cell = static_cast<std::size_t>(targets[k]);
      if (owner[cell] == kCollision) continue;
      if (owner[cell] != kNone && owner[cell] != static_cast<int>(j)) {
        owner[cell] = kCollision;
        out.pixels()[cell] = kWhite;
        continue;
      }
      const std::size_t pix = k / per_pixel;
      owner[cell] = static_cast<int>(j);
      out.pixels()[cell] = src.at(static_cast<int>(pix % static_cast<std::size_t>(src.width())),
                                  static_cast<int>(pix / static_cast<std::size_t>(src.width())));
    }
  }

  PackResult result;
  std::vector<std::uint8_t> voters(out.pixel_count(), 0);
  for (std::size_t i = 0; i < owner.size(); ++i) {
    voters[i] = owner[i] >= 0 ? 1 : 0;
    result.written += owner[i] >= 0 ? 1 : 0;
    result.collisions += owner[i] == kCollision ? 1 : 0;
  }
  // Collision pixels are neither holes nor voters.
  std::vector<std::uint8_t> settled = voters;
  for (std::size_t i = 0; i < owner.size(); ++i)
    if (owner[i] == kCollision) settled[i] = 1;
  result.picture = detail::fill_holes(out, settled, voters);
  for (std::size_t i = 0; i < owner.size(); ++i)
    if (!settled[i] && result.picture.pixels()[i] != kTransparent) ++result.filled;
  return result;
}

/// combined o T^(p)_FG on the source domain.
inline Picture unpack_masked(const Picture& combined, double threshold, const IfsSystem& f_template,
                             const IfsSystem& g, int out_resolution, int depth = -1) {
  return transform_raster(packing_transform(f_template, g, threshold, depth), combined, out_resolution);
}

// ---------------------------------------------------------------------------
// Measure-theoretic packing (coupled chaos game)
// ---------------------------------------------------------------------------

struct MeasureSource {
  Picture picture;
  IfsSystem ifs;
  ProbabilityVector probs;
  long long iterations = 0;
};

/// Seed of the orbit that encodes source `index` (source 0 uses the seed itself).
inline std::uint64_t orbit_seed(std::uint64_t seed, std::size_t index) { return seed ^ index; }

/// Probabilities proportional to |det| of each affine map: the areas of the
/// images of the unit square.
inline ProbabilityVector area_probabilities(const IfsSystem& ifs) {
  std::vector<double> p;
  double total = 0.0;
  for (const auto& m : ifs.maps()) {
    const auto* a = std::get_if<AffineMap2>(&m);
    if (!a) throw InvalidArgument("area probabilities need affine maps");
    p.push_back(std::abs(a->determinant()));
    total += p.back();
  }
  for (double& v : p) v /= total;
  return ProbabilityVector(p);
}

namespace detail {

// Runs the coupled orbit X_k = f_s(X_{k-1}), Z_k = h_s(Z_{k-1}) from the
// lower-left domain corners and calls visit(X_k, Z_k) at every step.
template <typename Visit>
void coupled_orbit(const IfsSystem& f, const IfsSystem& h, const ProbabilityVector& probs,
                   long long iterations, std::uint64_t seed, Visit&& visit) {
  if (probs.size() != f.size() || f.size() != h.size())
    throw BadProbabilities("probability vector, source and carrier must share N");
  SymbolSampler sampler(probs, seed);
  Point2 x{f.domain().xmin, f.domain().ymin};
  Point2 z{h.domain().xmin, h.domain().ymin};
  for (long long k = 0; k < iterations; ++k) {
    const int s = sampler.next();
    x = apply(f.map(s), x);
    z = apply(h.map(s), z);
    visit(x, z);
  }
}

}  // namespace detail

/// Paints each source into a blank carrier picture E in list order: at every
/// step of the coupled orbit, E at Z_k takes the source colour at X_k (the
/// latest colour wins). Orbits run sequentially; their order matters.
inline Picture encode_measure(const std::vector<MeasureSource>& sources, const IfsSystem& carrier,
                              int out_resolution, std::uint64_t seed) {
  Picture e(out_resolution, out_resolution);
  for (std::size_t j = 0; j < sources.size(); ++j) {
    const MeasureSource& s = sources[j];
    detail::coupled_orbit(s.ifs, carrier, s.probs, s.iterations, orbit_seed(seed, j),
                          [&](Point2 x, Point2 z) {
                            const auto pz = e.pixel_of(z, carrier.domain());
                            const auto px = s.picture.pixel_of(x, s.ifs.domain());
                            if (pz && px) e.at(pz->col, pz->row) = s.picture.at(px->col, px->row);
                          });
  }
  return e;
}

/// Replays a coupled orbit and paints the output at X_k with E's colour at
/// Z_k. Unvisited pixels stay transparent.
inline Picture decode_measure(const Picture& e, const IfsSystem& source_ifs, const ProbabilityVector& probs,
                              const IfsSystem& carrier, long long iterations, std::uint64_t seed,
                              int out_resolution) {
  Picture out(out_resolution, out_resolution);
  detail::coupled_orbit(source_ifs, carrier, probs, iterations, seed, [&](Point2 x, Point2 z) {
    const auto px = out.pixel_of(x, source_ifs.domain());
    const auto pz = e.pixel_of(z, carrier.domain());
    if (px && pz) out.at(px->col, px->row) = e.at(pz->col, pz->row);
  });
  return out;
}

}  // namespace fractrans
