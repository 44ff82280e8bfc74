#pragma once

#include <limits>
#include <stdexcept>

namespace bvsamp {

/// Trace side convention: minus = limit from the left, plus = from the right.
enum class Side { minus, plus };

/// An interval on the real line with explicit open/closed endpoint flags.
/// Endpoints may be infinite; an infinite endpoint is always treated as open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval all() { return Interval{}; }

  static Interval closed(double a, double b) {
    return Interval{a, b, true, true};
  }

  static Interval half_open(double a, double b) {  // [a, b)
    return Interval{a, b, true, false};
  }

  static Interval open(double a, double b) {
    return Interval{a, b, false, false};
  }

  /// [a, +inf)
  static Interval from(double a) {
    return Interval{a, std::numeric_limits<double>::infinity(), true, false};
  }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
  }

  bool is_all() const {
    return lo == -std::numeric_limits<double>::infinity() &&
           hi == std::numeric_limits<double>::infinity();
  }
};

}  // namespace bvsamp
