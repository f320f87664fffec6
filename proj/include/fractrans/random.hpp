#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/settings.hpp"

namespace fractrans {

// Nonnegative weights summing to one.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw BadProbabilities("empty probability vector");
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw BadProbabilities("probability " + std::to_string(v) + " is negative or not finite");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerances().probability_sum)
      throw BadProbabilities("probabilities sum to " + std::to_string(sum));
  }

  static ProbabilityVector uniform(std::size_t n) {
    return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }
  bool operator==(const ProbabilityVector&) const = default;

 private:
  std::vector<double> p_;
};

// Draws i.i.d. symbols in [1, N] from std::mt19937_64. The engine is fully
// specified by the standard; the uniform variate is built here from the top 53
// bits rather than with std::uniform_real_distribution, whose algorithm is
// implementation-defined. Streams are therefore identical on every platform.
class SymbolSampler {
 public:
  SymbolSampler(const ProbabilityVector& probs, std::uint64_t seed) : engine_(seed) {
    double acc = 0.0;
    cumulative_.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cumulative_.push_back(acc);
    }
    last_positive_ = 0;
    for (std::size_t i = 0; i < probs.size(); ++i)
      if (probs[i] > 0.0) last_positive_ = i;
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int next() {
    const double u = uniform() * cumulative_.back();
    for (std::size_t i = 0; i < cumulative_.size(); ++i)
      if (u < cumulative_[i]) return static_cast<int>(i) + 1;
    return static_cast<int>(last_positive_) + 1;
  }

 private:
  std::mt19937_64 engine_;
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

}  // namespace fractrans
