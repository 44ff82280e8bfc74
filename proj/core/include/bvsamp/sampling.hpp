#pragma once

#include <vector>

#include "bvsamp/measure.hpp"
#include "bvsamp/spline.hpp"
#include "bvsamp/system.hpp"

namespace bvsamp {

/// A (generalized) one-sided sampling functional D^d delta_t^±, acting on
/// order-N splines with 0 <= d <= N-1.
struct SamplingFunctional {
  double t;
  Side side;
  int d;
  int order;
  friend bool operator==(const SamplingFunctional&,
                         const SamplingFunctional&) = default;
};

/// A finite linear combination of sampling functionals; the measurement
/// functional applied to one data channel.
class Measurement {
 public:
  struct Term {
    double coeff;
    SamplingFunctional functional;
    friend bool operator==(const Term&, const Term&) = default;
  };

  explicit Measurement(std::vector<Term> terms);

  static Measurement single(double coeff, double t, Side side, int d,
                            int order);

  const std::vector<Term>& terms() const { return terms_; }
  int order() const { return order_; }

  /// True iff every term has d = N-1.
  bool top_order_only() const;

  double min_abscissa() const;
  double max_abscissa() const;

  friend bool operator==(const Measurement&, const Measurement&) = default;

 private:
  std::vector<Term> terms_;
  int order_;
};

double apply(const Measurement& m, const PolySpline& f);

/// A constant C with |apply(m, f)| <= C * gbv_norm(f, sys) for all f.
/// Tight (C = sum |c_i|) when every term has d = N-1 and abscissa >= anchor;
/// an upper bound otherwise.
double continuity_bound(const Measurement& m, const FundamentalSystem& sys);

struct WeakstarSample {
  double pairing;           ///< <g, D f_n>
  double trace;             ///< f_n^+(0)
  std::vector<double> jet;  ///< (<phi_j, f_n>)
};

/// The weak*-discontinuity witness f_n = u - u(. - 1/n): the predual
/// pairings vanish as n grows while the right trace at 0 stays at 1.
WeakstarSample weakstar_counterexample(int n,
                                       const PiecewiseLinearTestFunction& g,
                                       const FundamentalSystem& sys);

}  // namespace bvsamp
