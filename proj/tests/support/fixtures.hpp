#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's Mask/Region/IfsSystem code paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fractrans/fractrans.hpp"

namespace fixtures {

using fractrans::Picture;
using fractrans::Point2;
using fractrans::Rgba;

/// Deterministic stand-in for a natural photograph: smooth colour gradients,
/// a soft blob, hard-edged shapes and a band of fine stripes.
inline Picture synthetic_photo(int resolution) {
  Picture pic(resolution, resolution);
  const auto clamp8 = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::fmin(255.0, std::fmax(0.0, v))));
  };
  for (int row = 0; row < resolution; ++row)
    for (int col = 0; col < resolution; ++col) {
      const Point2 p = pic.pixel_center(col, row);
      double r = 200.0 * p.x + 30.0 * std::sin(7.0 * p.y);
      double g = 60.0 + 150.0 * p.y * (1.0 - 0.5 * p.x);
      double b = 120.0 + 90.0 * std::cos(5.0 * (p.x + p.y));
      const double blob = std::exp(-((p.x - 0.62) * (p.x - 0.62) + (p.y - 0.58) * (p.y - 0.58)) / 0.02);
      r += 60.0 * blob;
      g += 40.0 * blob;
      b -= 50.0 * blob;
      if (std::hypot(p.x - 0.3, p.y - 0.7) < 0.12) {
        r = 230.0;
        g = 200.0 - 80.0 * p.y;
        b = 40.0;
      }
      if (p.x > 0.55 && p.x < 0.85 && p.y > 0.12 && p.y < 0.32) {
        r = 30.0 + 40.0 * p.x;
        g = 90.0;
        b = 200.0;
      }
      if (p.y > 0.42 && p.y < 0.5 && (static_cast<int>(p.x * 48.0) % 2 == 0)) {
        r *= 0.4;
        g *= 0.4;
        b *= 0.4;
      }
      pic.at(col, row) = {clamp8(r), clamp8(g), clamp8(b), 255};
    }
  return pic;
}

inline Picture inverted(const Picture& src) {
  Picture out = src;
  for (auto& p : out.pixels()) p = {static_cast<std::uint8_t>(255 - p.r), static_cast<std::uint8_t>(255 - p.g),
                                    static_cast<std::uint8_t>(255 - p.b), p.a};
  return out;
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return dist_(rng_); }
  double in(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  Point2 point() {
    const double x = (*this)();
    return {x, (*this)()};
  }
  int symbol(int n) { return 1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

// ---------------------------------------------------------------------------
// Oracles for the rectangle family H_{r,s}
// ---------------------------------------------------------------------------

// The x branch of symbol s is the "r" branch for s in {1, 4}; the y branch is
// the "r" branch for s in {1, 2}.
inline bool x_low(int s) { return s == 1 || s == 4; }
inline bool y_low(int s) { return s == 1 || s == 2; }

/// h_{s1} o ... o h_{sK}(seed) for H_{r,s}, one coordinate at a time.
inline Point2 hrs_coding_point(double r, double s, const std::vector<int>& addr, Point2 seed) {
  double x = seed.x, y = seed.y;
  for (std::size_t k = addr.size(); k-- > 0;) {
    x = x_low(addr[k]) ? r * x : s * x + 1.0 - s;
    y = y_low(addr[k]) ? r * y : s * y + 1.0 - s;
  }
  return {x, y};
}

/// Quadrant-mask address for H_{r,s}: each coordinate follows the 1D inverse
/// dynamics with threshold p ("<= p" takes the r branch).
inline std::vector<int> hrs_quadrant_address(double r, double s, double p, Point2 pt, int depth) {
  std::vector<int> out;
  double x = pt.x, y = pt.y;
  for (int k = 0; k < depth; ++k) {
    const bool xl = x <= p, yl = y <= p;
    out.push_back(xl ? (yl ? 1 : 4) : (yl ? 2 : 3));
    x = xl ? x / r : (x - 1.0 + s) / s;
    y = yl ? y / r : (y - 1.0 + s) / s;
    x = std::fmin(1.0, std::fmax(0.0, x));
    y = std::fmin(1.0, std::fmax(0.0, y));
  }
  return out;
}

inline std::vector<int> symbols(const fractrans::Address& a) {
  return std::vector<int>(a.symbols().begin(), a.symbols().end());
}

}  // namespace fixtures
