#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/geometry.hpp"
#include "fractrans/parallel.hpp"
#include "fractrans/random.hpp"
#include "fractrans/raster.hpp"
#include "fractrans/settings.hpp"

namespace fractrans {

// Finite symbol string sigma_1 ... sigma_K over {1..N}, N <= 255.
class Address {
 public:
  Address() = default;
  explicit Address(const std::vector<int>& symbols) {
    symbols_.reserve(symbols.size());
    for (int s : symbols) push_back(s);
  }

  void push_back(int symbol) {
    if (symbol < 1 || symbol > 255)
      throw InvalidArgument("address symbol " + std::to_string(symbol) + " out of range");
    symbols_.push_back(static_cast<std::uint8_t>(symbol));
  }
  void reserve(std::size_t n) { symbols_.reserve(n); }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  int operator[](std::size_t k) const { return symbols_[k]; }
  const std::vector<std::uint8_t>& symbols() const { return symbols_; }

  /// Digits when every symbol is below 10, comma separated otherwise.
  std::string to_string() const {
    bool small = true;
    for (auto s : symbols_) small = small && s < 10;
    std::string out;
    for (std::size_t k = 0; k < symbols_.size(); ++k) {
      if (!small && k > 0) out += ',';
      out += std::to_string(symbols_[k]);
    }
    return out;
  }

  bool operator==(const Address&) const = default;

 private:
  std::vector<std::uint8_t> symbols_;
};

/// Drops the first symbol.
inline Address shift(const Address& addr) {
  if (addr.empty()) throw EmptyAddress("cannot shift an empty address");
  std::vector<int> rest(addr.symbols().begin() + 1, addr.symbols().end());
  return Address(rest);
}

// Ordered maps f_1..f_N over an axis-aligned domain, with a user-asserted
// uniform contraction factor. Construction spot-checks that every map sends the
// domain into itself unless `check_self_map` is false (some projective systems
// have an attractor but no invariant axis-aligned rectangle).
class IfsSystem {
 public:
  IfsSystem(std::vector<MapVariant> maps, double lipschitz_bound, Rect domain = Rect::unit(),
            bool check_self_map = true)
      : maps_(std::move(maps)), domain_(domain), lipschitz_(lipschitz_bound),
        check_self_map_(check_self_map) {
    if (maps_.empty()) throw InvalidArgument("an IFS needs at least one map");
    if (maps_.size() > 255) throw InvalidArgument("at most 255 maps are supported");
    if (!(lipschitz_ > 0.0 && lipschitz_ < 1.0))
      throw InvalidArgument("lipschitz bound must lie in (0, 1)");
    if (!(domain_.width() > 0.0 && domain_.height() > 0.0))
      throw InvalidArgument("domain rectangle must have positive extent");
    if (check_self_map_) verify_self_map();
  }

  std::size_t size() const { return maps_.size(); }
  const MapVariant& map(int symbol) const { return maps_.at(static_cast<std::size_t>(symbol - 1)); }
  const std::vector<MapVariant>& maps() const { return maps_; }
  const Rect& domain() const { return domain_; }
  double lipschitz_bound() const { return lipschitz_; }
  bool checks_self_map() const { return check_self_map_; }

  /// Upper bound on the truncation error of a depth-K coding point.
  double depth_error_bound(std::size_t depth) const {
    return std::pow(lipschitz_, static_cast<double>(depth)) * domain_.diameter();
  }

  bool operator==(const IfsSystem&) const = default;

 private:
  void verify_self_map() const {
    constexpr int n = 32;
    const double tol = tolerances().self_map;
    for (std::size_t m = 0; m < maps_.size(); ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Point2 p{domain_.xmin + domain_.width() * i / (n - 1),
                         domain_.ymin + domain_.height() * j / (n - 1)};
          Point2 q;
          try {
            q = apply(maps_[m], p);
          } catch (const DegenerateDenominator&) {
            throw InvalidArgument("map " + std::to_string(m + 1) + " is undefined on the domain");
          }
          if (!domain_.contains(q, tol))
            throw InvalidArgument("map " + std::to_string(m + 1) +
                                  " does not send the domain into itself");
        }
  }

  std::vector<MapVariant> maps_;
  Rect domain_;
  double lipschitz_;
  bool check_self_map_;
};

/// f_{s1} o f_{s2} o ... o f_{sK}(seed): the depth-K approximation of pi(sigma).
inline Point2 coding_point(const IfsSystem& ifs, const Address& addr, Point2 seed) {
  if (addr.empty()) throw EmptyAddress("coding point of an empty address");
  Point2 p = seed;
  for (std::size_t k = addr.size(); k-- > 0;) {
    const int s = addr[k];
    if (static_cast<std::size_t>(s) > ifs.size())
      throw InvalidArgument("address symbol " + std::to_string(s) + " exceeds N");
    p = apply(ifs.map(s), p);
  }
  return p;
}

/// Smallest K with lipschitz^K * diam(domain) <= epsilon.
inline int recommended_depth(const IfsSystem& ifs, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const double diam = ifs.domain().diameter();
  int k = 0;
  double bound = diam;
  while (bound > epsilon) {
    bound *= ifs.lipschitz_bound();
    ++k;
  }
  return k;
}

inline constexpr int kChaosGameBurnIn = 100;

/// Visit counts of the orbit x_k = f_{sigma_k}(x_{k-1}) started at the domain
/// centre, after discarding the burn-in. Points leaving the domain are not counted.
inline CountGrid attractor_chaos_game(const IfsSystem& ifs, const ProbabilityVector& probs,
                                      long long n, std::uint64_t seed, int resolution) {
  if (probs.size() != ifs.size())
    throw BadProbabilities("need " + std::to_string(ifs.size()) + " probabilities");
  if (n < 1) throw InvalidArgument("chaos game needs at least one point");
  CountGrid counts(resolution, resolution, 0);
  SymbolSampler sampler(probs, seed);
  Point2 x = ifs.domain().center();
  for (int k = 0; k < kChaosGameBurnIn; ++k) x = apply(ifs.map(sampler.next()), x);
  for (long long k = 0; k < n; ++k) {
    x = apply(ifs.map(sampler.next()), x);
    if (auto c = cell_of(ifs.domain(), resolution, resolution, x)) ++counts[*c];
  }
  return counts;
}

inline OccupancyGrid occupancy(const CountGrid& counts) {
  OccupancyGrid g(counts.width(), counts.height(), 0);
  for (std::size_t i = 0; i < counts.size(); ++i) g.data()[i] = counts.data()[i] > 0 ? 1 : 0;
  return g;
}

/// Rasterised F^k(domain): start with every cell occupied and, each round,
/// replace the raster by the cells hit by f_i(centre) over occupied cells.
inline OccupancyGrid attractor_deterministic(const IfsSystem& ifs, int iterations, int resolution) {
  if (iterations < 1) throw InvalidArgument("deterministic attractor needs iterations >= 1");
  OccupancyGrid current(resolution, resolution, 1);
  for (int it = 0; it < iterations; ++it) {
    OccupancyGrid next(resolution, resolution, 0);
    parallel_for(0, resolution, [&](int iy) {
      for (int ix = 0; ix < resolution; ++ix) {
        if (!current(ix, iy)) continue;
        const Point2 p = cell_center(ifs.domain(), resolution, resolution, {ix, iy});
        for (const auto& m : ifs.maps()) {
          Point2 q;
          try {
            q = apply(m, p);
          } catch (const DegenerateDenominator&) {
            continue;
          }
          if (auto c = cell_of(ifs.domain(), resolution, resolution, q))
            std::atomic_ref<std::uint8_t>(next[*c]).store(1, std::memory_order_relaxed);
        }
      }
    });
    current = std::move(next);
  }
  return current;
}

}  // namespace fractrans
