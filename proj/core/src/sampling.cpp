#include "bvsamp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bvsamp {

namespace {

// (t - a)^k / k!
double shifted_monomial(double t, double a, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= (t - a) / (j + 1);
  return v;
}

}  // namespace

Measurement::Measurement(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty())
    throw std::invalid_argument("measurement needs at least one term");
  order_ = terms_.front().functional.order;
  for (const Term& term : terms_) {
    const SamplingFunctional& sf = term.functional;
    if (sf.order != order_)
      throw std::invalid_argument("measurement terms must share one order");
    if (sf.d < 0 || sf.d >= order_)
      throw std::invalid_argument("derivative order d must be in [0, N-1]");
    if (term.coeff == 0.0)
      throw std::invalid_argument("measurement coefficients must be nonzero");
    if (!std::isfinite(sf.t) || !std::isfinite(term.coeff))
      throw std::invalid_argument("non-finite measurement term");
  }
}

Measurement Measurement::single(double coeff, double t, Side side, int d,
                                int order) {
  return Measurement({Term{coeff, SamplingFunctional{t, side, d, order}}});
}

bool Measurement::top_order_only() const {
  return std::all_of(terms_.begin(), terms_.end(), [this](const Term& t) {
    return t.functional.d == order_ - 1;
  });
}

double Measurement::min_abscissa() const {
  double m = terms_.front().functional.t;
  for (const Term& t : terms_) m = std::min(m, t.functional.t);
  return m;
}

double Measurement::max_abscissa() const {
  double m = terms_.front().functional.t;
  for (const Term& t : terms_) m = std::max(m, t.functional.t);
  return m;
}

double apply(const Measurement& m, const PolySpline& f) {
  if (f.order() != m.order())
    throw std::invalid_argument("measurement/spline order mismatch");
  double v = 0.0;
  for (const Measurement::Term& term : m.terms()) {
    const SamplingFunctional& sf = term.functional;
    v += term.coeff * generalized_trace(f, sf.t, sf.side, sf.d);
  }
  return v;
}

double continuity_bound(const Measurement& m, const FundamentalSystem& sys) {
  if (m.order() != sys.order())
    throw std::invalid_argument("measurement/system order mismatch");
  int N = sys.order();
  double a = sys.anchor();
  double C = 0.0;
  for (const Measurement::Term& term : m.terms()) {
    const SamplingFunctional& sf = term.functional;
    int d = sf.d;
    // sup over tau in K of the d-th t-derivative of the kernel. On the
    // interior the kernel is u_{N-d}(t - tau), maximal as tau approaches
    // the anchor; at tau = a the null correction p_{N-1-d}(t) kicks in.
    double interior = greens(N - d, sf.t - a, Side::plus);
    double corr = shifted_monomial(sf.t, a, N - 1 - d);
    double at_anchor_plus = std::abs(greens(N - d, sf.t - a, Side::plus) - corr);
    double at_anchor_minus =
        std::abs(greens(N - d, sf.t - a, Side::minus) - corr);
    double c_kernel = std::max({interior, at_anchor_plus, at_anchor_minus});
    // max_j |p_j^(d)(t)| = max_{j>=d} |(t-a)^{j-d}/(j-d)!|
    double c_null = 0.0;
    for (int j = d; j < N; ++j)
      c_null = std::max(c_null, std::abs(shifted_monomial(sf.t, a, j - d)));
    C += std::abs(term.coeff) * std::max(c_kernel, c_null);
  }
  return C;
}

WeakstarSample weakstar_counterexample(int n,
                                       const PiecewiseLinearTestFunction& g,
                                       const FundamentalSystem& sys) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (sys.order() != 1 || sys.anchor() > -1.0)
    throw std::invalid_argument(
        "counterexample needs an order-1 system anchored at or below -1");
  PolySpline f(1, {}, {Knot{0.0, 1.0}, Knot{1.0 / n, -1.0}});
  WeakstarSample s;
  s.pairing = pair_continuous(g, derivative_measure(f));
  s.trace = eval_trace(f, 0.0, Side::plus);
  s.jet = sys.jet(f);
  return s;
}

}  // namespace bvsamp
