#pragma once

#include <vector>

#include "bvsamp/interval.hpp"
#include "bvsamp/measure.hpp"

namespace bvsamp {

struct Knot {
  double location;
  double weight;
  friend bool operator==(const Knot&, const Knot&) = default;
};

/// A D^N-spline, the canonical GBV representative:
///
///   f(t) = sum_j b_j t^j/j!  +  sum_k a_k (t - tau_k)_+^{N-1}/(N-1)!
///
/// Knots are kept in canonical form (sorted, merged, zero weights dropped),
/// so equality of representations is bit-exact. Pointwise values are exposed
/// only through one-sided traces.
class PolySpline {
 public:
  PolySpline(int order, std::vector<double> null_coeffs,
             std::vector<Knot> knots);

  static PolySpline zero(int order);
  static PolySpline polynomial(int order, std::vector<double> null_coeffs);
  /// weight * u_N(. - tau)
  static PolySpline greens_shift(int order, double tau, double weight = 1.0);

  int order() const { return order_; }
  const std::vector<double>& null_coeffs() const { return null_coeffs_; }
  const std::vector<Knot>& knots() const { return knots_; }

  bool is_zero() const;
  /// Weight of the knot at `location`, 0 if none.
  double knot_weight_at(double location) const;

  friend bool operator==(const PolySpline&, const PolySpline&) = default;

 private:
  int order_;
  std::vector<double> null_coeffs_;
  std::vector<Knot> knots_;
};

/// Side-trace of the causal Green's function u_N(x) = (x)_+^{N-1}/(N-1)!.
/// For N = 1 this is the unit step, whose traces at 0 differ by side;
/// for N >= 2 both traces agree.
double greens(int order, double x, Side side);

/// One-sided trace f^±(t).
double eval_trace(const PolySpline& f, double t, Side side);

/// Side-trace of the d-th derivative, 0 <= d <= N-1.
double generalized_trace(const PolySpline& f, double t, Side side, int d);

/// D^N f = sum_k a_k delta_{tau_k}; purely atomic.
SignedMeasure derivative_measure(const PolySpline& f);

PolySpline add(const PolySpline& f, const PolySpline& g);
PolySpline scale(const PolySpline& f, double s);

}  // namespace bvsamp
