#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fadetrig {

/// Physical leader-follower state: separation L (m) and leader bearing alpha (rad).
struct StateVec {
  double l = 0.0;
  double alpha = 0.0;

  /// |x| := max_i |x_i|, optionally weighting each component.
  double inf_norm(double scale_l = 1.0, double scale_alpha = 1.0) const {
    return std::max(std::abs(scale_l * l), std::abs(scale_alpha * alpha));
  }

  friend bool operator==(const StateVec&, const StateVec&) = default;
};

inline StateVec operator-(const StateVec& a, const StateVec& b) {
  return {a.l - b.l, a.alpha - b.alpha};
}

// Error types. The engine catches these per sample path and records the kind.

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The true signal left the quantizer box. Never clipped.
class ContainmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// eta <= 0 in the half-width recursion: the interval is too long for the bound.
class TriggerViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The state left the region where the self-trigger yields a positive interval.
class OutsideOmegaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace fadetrig
