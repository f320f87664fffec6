#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fractrans/error.hpp"
#include "fractrans/ifs.hpp"
#include "fractrans/parallel.hpp"
#include "fractrans/picture.hpp"
#include "fractrans/random.hpp"

namespace fractrans {

inline constexpr double kEscapeMargin = 0.01;

/// Steps of the expanding map Q before p leaves [-0.01, 1.01]^2, or -1 when
/// it is still inside after max_iter steps. Q applies (x/a, y/b) on
/// x + y <= 1 and ((x - 1 + b)/b, (y - 1 + a)/a) elsewhere.
inline int escape_count(double a, double b, Point2 p, int max_iter) {
  const auto inside = [](Point2 q) {
    return q.x >= -kEscapeMargin && q.x <= 1.0 + kEscapeMargin && q.y >= -kEscapeMargin &&
           q.y <= 1.0 + kEscapeMargin;
  };
  for (int k = 1; k <= max_iter; ++k) {
    if (p.x + p.y <= 1.0) p = {p.x / a, p.y / b};
    else p = {(p.x - 1.0 + b) / b, (p.y - 1.0 + a) / a};
    if (!inside(p)) return k;
  }
  return -1;
}

/// Grayscale escape-time picture of the repeller of Q over the unit square.
/// Escaping pixels get floor(254 * steps / max_iter), the rest 255.
inline Picture render_repeller_escape(double a, double b, int resolution, int max_iter) {
  if (!(a >= b && b > 0.0 && a + b >= 1.0)) throw InvalidArgument("repeller needs a >= b > 0, a + b >= 1");
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  Picture out(resolution, resolution);
  parallel_for(0, resolution, [&](int row) {
    for (int col = 0; col < resolution; ++col) {
      const int steps = escape_count(a, b, out.pixel_center(col, row), max_iter);
      const auto level =
          steps < 0 ? std::uint8_t{255} : static_cast<std::uint8_t>(254LL * steps / max_iter);
      out.at(col, row) = {level, level, level, 255};
    }
  });
  return out;
}

/// Grayscale picture of log(1 + visits) / log(1 + max visits) for a chaos
/// game orbit of n points.
inline Picture render_attractor_density(const IfsSystem& ifs, const ProbabilityVector& probs, long long n,
                                        std::uint64_t seed, int resolution) {
  const CountGrid counts = attractor_chaos_game(ifs, probs, n, seed, resolution);
  const std::uint32_t peak = *std::max_element(counts.data().begin(), counts.data().end());
  Picture out(resolution, resolution, kBlack);
  if (peak == 0) return out;
  const double scale = 255.0 / std::log1p(static_cast<double>(peak));
  for (int iy = 0; iy < resolution; ++iy)
    for (int ix = 0; ix < resolution; ++ix) {
      const auto level = static_cast<std::uint8_t>(
          std::lround(std::log1p(static_cast<double>(counts(ix, iy))) * scale));
      out.at(ix, resolution - 1 - iy) = {level, level, level, 255};
    }
  return out;
}

}  // namespace fractrans
