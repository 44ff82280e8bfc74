#pragma once

// Minimal double-double arithmetic (Bailey-style error-free transforms).
// Used where near-cancelling sums must keep small *relative* error.

#include <cmath>

namespace bvsamp::detail {

struct dd {
  double hi = 0.0;
  double lo = 0.0;
  dd() = default;
  dd(double x) : hi(x), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}
  double value() const { return hi + lo; }
};

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return dd(s, b - (s - a));
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return dd(s, (a - (s - bb)) + (b - bb));
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return dd(p, std::fma(a, b, -p));
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  double e = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, e);
}

inline dd neg(dd a) { return dd(-a.hi, -a.lo); }

inline dd sub(dd a, dd b) { return add(a, neg(b)); }

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  double e = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, e);
}

inline dd div(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = sub(a, mul(b, dd(q1)));
  double q2 = r.hi / b.hi;
  return quick_two_sum(q1, q2);
}

}  // namespace bvsamp::detail
