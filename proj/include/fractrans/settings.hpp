#pragma once

namespace fractrans {

// Numerical tolerances shared by all modules. Defaults are the documented
// values; a config document may override them before any system is built.
struct Tolerances {
  // |g*x + h*y + j| at or below this is a degenerate projective denominator.
  double projective_denominator = 1e-12;
  // Slack around the unit square when accepting a bilinear preimage.
  double bilinear_slack = 1e-9;
  // Orbit points this far outside the domain are clamped back, farther is an error.
  double domain_clamp = 1e-9;
  // Allowed overshoot when spot-checking that maps send the domain into itself.
  double self_map = 1e-9;
  // |sum(p) - 1| allowed for a probability vector.
  double probability_sum = 1e-9;

  bool operator==(const Tolerances&) const = default;
};

inline Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

}  // namespace fractrans
