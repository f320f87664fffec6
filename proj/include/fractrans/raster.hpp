#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/geometry.hpp"
#include "fractrans/settings.hpp"

namespace fractrans {

struct Cell {
  int ix = 0;  // column, grows with x
  int iy = 0;  // row, grows with y (row 0 is at ymin)
  bool operator==(const Cell&) const = default;
};

// Dense width x height grid indexed by (ix, iy) with iy = 0 at the bottom of the
// domain. Pictures use top-down rows; grids do not.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked(width)) * checked(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int ix, int iy) { return data_[index(ix, iy)]; }
  const T& operator()(int ix, int iy) const { return data_[index(ix, iy)]; }
  T& operator[](Cell c) { return (*this)(c.ix, c.iy); }
  const T& operator[](Cell c) const { return (*this)(c.ix, c.iy); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  static int checked(int n) {
    if (n < 1) throw InvalidArgument("grid dimensions must be positive");
    return n;
  }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(ix);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using OccupancyGrid = Grid<std::uint8_t>;
using CountGrid = Grid<std::uint32_t>;

// Cell containing p: floor((p - min) / extent * n), with the closing edge of the
// domain folded into the last cell. Points outside the domain (beyond the clamp
// tolerance) have no cell.
inline std::optional<Cell> cell_of(const Rect& domain, int nx, int ny, Point2 p) {
  const double slack = tolerances().domain_clamp;
  if (!domain.contains(p, slack)) return std::nullopt;
  const double u = (p.x - domain.xmin) / domain.width();
  const double v = (p.y - domain.ymin) / domain.height();
  const auto idx = [](double t, int n) {
    const double s = std::floor(t * n);
    if (s < 0.0) return 0;
    if (s >= n) return n - 1;
    return static_cast<int>(s);
  };
  return Cell{idx(u, nx), idx(v, ny)};
}

inline Point2 cell_center(const Rect& domain, int nx, int ny, Cell c) {
  return {domain.xmin + (c.ix + 0.5) / nx * domain.width(),
          domain.ymin + (c.iy + 0.5) / ny * domain.height()};
}

inline std::size_t count_occupied(const OccupancyGrid& g) {
  std::size_t n = 0;
  for (auto v : g.data()) n += v ? 1 : 0;
  return n;
}

// Dilation by the 3x3 neighbourhood.
inline OccupancyGrid dilate(const OccupancyGrid& g) {
  OccupancyGrid out(g.width(), g.height(), 0);
  for (int iy = 0; iy < g.height(); ++iy)
    for (int ix = 0; ix < g.width(); ++ix) {
      if (!g(ix, iy)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = ix + dx, y = iy + dy;
          if (x >= 0 && y >= 0 && x < g.width() && y < g.height()) out(x, y) = 1;
        }
    }
  return out;
}

}  // namespace fractrans
