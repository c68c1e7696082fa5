#pragma once

#include <algorithm>

namespace irrspec {

// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool symmetric() const noexcept { return lo == -hi; }

  static Interval symmetric_about_zero(double half_width) noexcept {
    return {-half_width, half_width};
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace irrspec
