#pragma once

#include <vector>

#include "bvsamp/interval.hpp"
#include "bvsamp/measure.hpp"
#include "bvsamp/spline.hpp"

namespace bvsamp {

/// A fundamental bi-orthogonal system over an interval K = [a, b] (b finite
/// or +inf), anchored at the left endpoint a:
///
///   null basis       p_j(t) = (t - a)^j / j!,           j < N
///   dual functionals phi_j  = D^j delta_a^+  (right trace at a)
///
/// The pair is bi-orthogonal and induces the canonical local right-inverse
/// of D^N on K, which is causal and locally shift-invariant on the interior.
class FundamentalSystem {
 public:
  FundamentalSystem(int order, Interval K);

  /// Default domain [min_abscissa - 1, +inf).
  static FundamentalSystem default_for(int order, double min_abscissa);

  int order() const { return order_; }
  const Interval& domain() const { return K_; }
  double anchor() const { return K_.lo; }

  /// p_j as a PolySpline (no knots), expanded in the t^i/i! basis.
  PolySpline null_basis(int j) const;

  /// The jet (<phi_0, f>, ..., <phi_{N-1}, f>).
  std::vector<double> jet(const PolySpline& f) const;

 private:
  int order_;
  Interval K_;
};

/// P f = sum_j <phi_j, f> p_j; idempotent, fixes the null space.
PolySpline project_null(const PolySpline& f, const FundamentalSystem& sys);

/// The canonical right-inverse: the unique order-N spline g with
/// D^N g = mu and <phi_j, g> = 0 for all j. Requires mu purely atomic and
/// supported in K.
PolySpline right_inverse(const SignedMeasure& mu, const FundamentalSystem& sys);

/// Kernel g_phi(t, tau) of the right-inverse. For tau in the interior of K
/// the null correction vanishes and g_phi(t, tau) = u_N(t - tau).
double kernel(const FundamentalSystem& sys, double t, double tau, Side side);

/// ||D^N f||_M + sum_j |<phi_j, f>|.
double gbv_norm(const PolySpline& f, const FundamentalSystem& sys);

}  // namespace bvsamp
