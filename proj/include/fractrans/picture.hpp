#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/geometry.hpp"

namespace fractrans {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 0;
  bool operator==(const Rgba&) const = default;
};

inline constexpr Rgba kTransparent{0, 0, 0, 0};
inline constexpr Rgba kWhite{255, 255, 255, 255};
inline constexpr Rgba kBlack{0, 0, 0, 255};

struct PixelIndex {
  int col = 0;
  int row = 0;
};

// Row-major RGBA raster, row 0 at the top. A picture always covers some domain
// rectangle: pixel (col, row) has centre
//   (xmin + (col + 0.5) / width * w, ymax - (row + 0.5) / height * h),
// which for the unit square is ((col + 0.5) / width, 1 - (row + 0.5) / height).
class Picture {
 public:
  Picture() = default;
  Picture(int width, int height, Rgba fill = kTransparent) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InvalidArgument("picture dimensions must be positive");
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return pixels_.size(); }

  Rgba& at(int col, int row) { return pixels_[index(col, row)]; }
  const Rgba& at(int col, int row) const { return pixels_[index(col, row)]; }

  std::vector<Rgba>& pixels() { return pixels_; }
  const std::vector<Rgba>& pixels() const { return pixels_; }

  Point2 pixel_center(int col, int row, const Rect& domain = Rect::unit()) const {
    return {domain.xmin + (col + 0.5) / width_ * domain.width(),
            domain.ymax - (row + 0.5) / height_ * domain.height()};
  }

  /// Pixel containing p, or nothing when p lies outside the domain.
  std::optional<PixelIndex> pixel_of(Point2 p, const Rect& domain = Rect::unit(),
                                     double slack = 1e-9) const {
    if (!domain.contains(p, slack)) return std::nullopt;
    const auto idx = [](double t, int n) {
      const double s = std::floor(t * n);
      if (s < 0.0) return 0;
      if (s >= n) return n - 1;
      return static_cast<int>(s);
    };
    return PixelIndex{idx((p.x - domain.xmin) / domain.width(), width_),
                      idx((domain.ymax - p.y) / domain.height(), height_)};
  }

  /// Nearest-neighbour colour at p; transparent outside the domain.
  Rgba sample(Point2 p, const Rect& domain = Rect::unit()) const {
    if (auto px = pixel_of(p, domain)) return at(px->col, px->row);
    return kTransparent;
  }

  bool operator==(const Picture&) const = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgba> pixels_;
};

/// Nearest-neighbour resample onto a width x height grid over the same domain.
inline Picture resample_nearest(const Picture& src, int width, int height) {
  Picture out(width, height);
  for (int row = 0; row < height; ++row)
    for (int col = 0; col < width; ++col) out.at(col, row) = src.sample(out.pixel_center(col, row));
  return out;
}

/// Alpha-composite over black (how transparent backgrounds are exported).
inline Picture over_black(const Picture& src) {
  Picture out = src;
  for (auto& p : out.pixels()) {
    const auto blend = [&](std::uint8_t c) {
      return static_cast<std::uint8_t>((c * p.a + 127) / 255);
    };
    p = {blend(p.r), blend(p.g), blend(p.b), 255};
  }
  return out;
}

/// Fraction of pixels at which two equally sized pictures differ.
inline double fraction_different(const Picture& a, const Picture& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InvalidArgument("pictures differ in size");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) diff += a.pixels()[i] == b.pixels()[i] ? 0 : 1;
  return static_cast<double>(diff) / static_cast<double>(a.pixel_count());
}

/// Mean absolute error per colour channel (RGB), in 8-bit levels.
inline double mean_absolute_error(const Picture& a, const Picture& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InvalidArgument("pictures differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const Rgba& p = a.pixels()[i];
    const Rgba& q = b.pixels()[i];
    sum += std::abs(p.r - q.r) + std::abs(p.g - q.g) + std::abs(p.b - q.b);
  }
  return sum / (3.0 * static_cast<double>(a.pixel_count()));
}

/// Peak signal-to-noise ratio over RGB, in dB (infinite for identical pictures).
inline double psnr(const Picture& a, const Picture& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InvalidArgument("pictures differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const Rgba& p = a.pixels()[i];
    const Rgba& q = b.pixels()[i];
    const double dr = p.r - q.r, dg = p.g - q.g, db = p.b - q.b;
    sum += dr * dr + dg * dg + db * db;
  }
  const double mse = sum / (3.0 * static_cast<double>(a.pixel_count()));
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace fractrans
