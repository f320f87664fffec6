#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "fractrans/error.hpp"
#include "fractrans/settings.hpp"

namespace fractrans {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  bool operator==(const Point2&) const = default;
};

inline double cross(Point2 u, Point2 v) { return u.x * v.y - u.y * v.x; }
inline double dot(Point2 u, Point2 v) { return u.x * v.x + u.y * v.y; }
inline double norm(Point2 u) { return std::hypot(u.x, u.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rect {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  static Rect unit() { return {}; }

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diameter() const { return std::hypot(width(), height()); }
  Point2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }

  bool contains(Point2 p, double slack = 0.0) const {
    return p.x >= xmin - slack && p.x <= xmax + slack && p.y >= ymin - slack &&
           p.y <= ymax + slack;
  }
  Point2 clamp(Point2 p) const {
    return {std::clamp(p.x, xmin, xmax), std::clamp(p.y, ymin, ymax)};
  }
  bool operator==(const Rect&) const = default;
};

/// (x, y) -> (a*x + b*y + e, c*x + d*y + f)
struct AffineMap2 {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  AffineMap2() = default;
  AffineMap2(double a_, double b_, double c_, double d_, double e_, double f_)
      : a(a_), b(b_), c(c_), d(d_), e(e_), f(f_) {
    if (!(std::abs(determinant()) > 0.0) || !std::isfinite(determinant()))
      throw InvalidArgument("affine map has zero determinant");
  }

  double determinant() const { return a * d - b * c; }

  Point2 apply(Point2 p) const { return {a * p.x + b * p.y + e, c * p.x + d * p.y + f}; }

  Point2 invert(Point2 p) const {
    const double det = determinant();
    const double u = p.x - e;
    const double v = p.y - f;
    return {(d * u - b * v) / det, (-c * u + a * v) / det};
  }

  bool operator==(const AffineMap2&) const = default;
};

/// m1 after m2.
inline AffineMap2 compose(const AffineMap2& m1, const AffineMap2& m2) {
  return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
          m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d,
          m1.a * m2.e + m1.b * m2.f + m1.e, m1.c * m2.e + m1.d * m2.f + m1.f};
}

/// (x, y) -> ((a*x + b*y + c) / w, (d*x + e*y + k) / w) with w = g*x + h*y + j.
/// Coefficients are kept exactly as given; nothing is normalized.
struct ProjectiveMap2 {
  double a = 1, b = 0, c = 0, d = 0, e = 1, k = 0, g = 0, h = 0, j = 1;

  ProjectiveMap2() = default;
  ProjectiveMap2(double a_, double b_, double c_, double d_, double e_, double k_, double g_,
                 double h_, double j_)
      : a(a_), b(b_), c(c_), d(d_), e(e_), k(k_), g(g_), h(h_), j(j_) {
    const double det = a * (e * j - k * h) - b * (d * j - k * g) + c * (d * h - e * g);
    if (!(std::abs(det) > 0.0) || !std::isfinite(det))
      throw InvalidArgument("projective coefficient matrix is singular");
  }

  Point2 apply(Point2 p) const {
    const double w = g * p.x + h * p.y + j;
    if (!(std::abs(w) > tolerances().projective_denominator))
      throw DegenerateDenominator("projective denominator vanishes at (" + std::to_string(p.x) +
                                  ", " + std::to_string(p.y) + ")");
    return {(a * p.x + b * p.y + c) / w, (d * p.x + e * p.y + k) / w};
  }

  // The adjugate is a projective inverse; its scale does not matter.
  Point2 invert(Point2 p) const {
    const double ia = e * j - k * h, ib = c * h - b * j, ic = b * k - c * e;
    const double id = k * g - d * j, ie = a * j - c * g, ik = c * d - a * k;
    const double ig = d * h - e * g, ih = b * g - a * h, ij = a * e - b * d;
    const double w = ig * p.x + ih * p.y + ij;
    if (!(std::abs(w) > tolerances().projective_denominator * std::max(1.0, std::abs(ij))))
      throw DegenerateDenominator("inverse projective denominator vanishes");
    return {(ia * p.x + ib * p.y + ic) / w, (id * p.x + ie * p.y + ik) / w};
  }

  bool operator==(const ProjectiveMap2&) const = default;
};

/// Sends the unit square corners (0,0), (1,0), (1,1), (0,1) to P, Q, R, S:
/// B(x, y) = P + x(Q - P) + y(S - P) + xy(R + P - Q - S).
struct BilinearMap2 {
  Point2 P{0, 0}, Q{1, 0}, R{1, 1}, S{0, 1};

  BilinearMap2() = default;
  BilinearMap2(Point2 p, Point2 q, Point2 r, Point2 s) : P(p), Q(q), R(r), S(s) {
    const std::array<Point2, 4> v{P, Q, R, S};
    double scale = 0.0;
    for (int i = 0; i < 4; ++i) scale = std::max(scale, distance(v[i], v[(i + 1) % 4]));
    if (!(scale > 0.0)) throw InvalidArgument("bilinear quadrilateral collapses to a point");
    for (int i = 0; i < 4; ++i) {
      const Point2 u = v[(i + 1) % 4] - v[i];
      const Point2 w = v[(i + 2) % 4] - v[i];
      if (std::abs(cross(u, w)) <= 1e-12 * scale * scale)
        throw InvalidArgument("bilinear quadrilateral has three collinear corners");
    }
  }

  Point2 apply(Point2 p) const {
    const Point2 E = Q - P, F = S - P, G = R + P - Q - S;
    return P + p.x * E + p.y * F + (p.x * p.y) * G;
  }

  std::optional<Point2> try_invert(Point2 p) const {
    const double slack = tolerances().bilinear_slack;
    const Point2 E = Q - P, F = S - P, G = R + P - Q - S, H = p - P;
    // Eliminating x from H = xE + yF + xyG leaves a2*y^2 + a1*y + a0 = 0.
    const double a2 = cross(G, F);
    const double a1 = cross(H, G) + cross(E, F);
    const double a0 = cross(H, E);

    std::array<double, 2> ys{std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::quiet_NaN()};
    double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0) {
      if (disc < -1e-12 * (a1 * a1 + std::abs(4.0 * a2 * a0))) return std::nullopt;
      disc = 0.0;
    }
    const double q = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
    ys[0] = q / a2;
    ys[1] = a0 / q;

    std::optional<Point2> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (double y : ys) {
      if (!std::isfinite(y)) continue;
      const Point2 D = E + y * G;
      const double dd = dot(D, D);
      if (!(dd > 0.0)) continue;
      Point2 cand{dot(H - y * F, D) / dd, y};
      cand = polish(p, cand);
      if (!(cand.x >= -slack && cand.x <= 1 + slack && cand.y >= -slack && cand.y <= 1 + slack))
        continue;
      const double err = distance(apply(cand), p);
      if (err < best_err) {
        best_err = err;
        best = cand;
      }
    }
    return best;
  }

  Point2 invert(Point2 p) const {
    if (auto r = try_invert(p)) return *r;
    throw NotInvertibleHere("no bilinear preimage of (" + std::to_string(p.x) + ", " +
                            std::to_string(p.y) + ") in the unit square");
  }

  bool operator==(const BilinearMap2&) const = default;

 private:
  // Two Newton steps on B(x, y) = p; the closed form loses digits near edges.
  Point2 polish(Point2 target, Point2 s) const {
    const Point2 E = Q - P, F = S - P, G = R + P - Q - S;
    for (int it = 0; it < 2; ++it) {
      const Point2 r = target - apply(s);
      const Point2 jx = E + s.y * G;
      const Point2 jy = F + s.x * G;
      const double det = cross(jx, jy);
      if (!(std::abs(det) > 0.0)) break;
      s = s + Point2{cross(r, jy) / det, cross(jx, r) / det};
    }
    return s;
  }
};

using MapVariant = std::variant<AffineMap2, ProjectiveMap2, BilinearMap2>;

inline Point2 apply(const MapVariant& map, Point2 p) {
  return std::visit([p](const auto& m) { return m.apply(p); }, map);
}

inline Point2 invert(const MapVariant& map, Point2 p) {
  return std::visit([p](const auto& m) { return m.invert(p); }, map);
}

// Non-throwing inverse for membership tests in hot loops.
inline std::optional<Point2> try_invert(const MapVariant& map, Point2 p) {
  if (const auto* bl = std::get_if<BilinearMap2>(&map)) return bl->try_invert(p);
  try {
    return invert(map, p);
  } catch (const DegenerateDenominator&) {
    return std::nullopt;
  }
}

inline std::string map_kind(const MapVariant& map) {
  switch (map.index()) {
    case 0: return "affine";
    case 1: return "projective";
    default: return "bilinear";
  }
}

}  // namespace fractrans
