#include "bvsamp/system.hpp"

#include <cmath>
#include <stdexcept>

namespace bvsamp {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

FundamentalSystem::FundamentalSystem(int order, Interval K)
    : order_(order), K_(K) {
  if (order_ < 1) throw std::invalid_argument("system order must be >= 1");
  if (!std::isfinite(K_.lo))
    throw std::invalid_argument("K must have a finite left endpoint");
  if (K_.empty()) throw std::invalid_argument("K must be nonempty");
  K_.lo_closed = true;  // the anchor belongs to K
  if (std::isinf(K_.hi)) K_.hi_closed = false;
}

FundamentalSystem FundamentalSystem::default_for(int order,
                                                 double min_abscissa) {
  return FundamentalSystem(order, Interval::from(min_abscissa - 1.0));
}

PolySpline FundamentalSystem::null_basis(int j) const {
  if (j < 0 || j >= order_)
    throw std::invalid_argument("null basis index out of range");
  // (t - a)^j/j! = sum_{i<=j} t^i/i! * (-a)^{j-i}/(j-i)!
  std::vector<double> b(static_cast<std::size_t>(order_), 0.0);
  double a = anchor();
  double pw = 1.0;
  for (int k = 0; k <= j; ++k) {
    b[static_cast<std::size_t>(j - k)] = pw / factorial(k);
    pw *= -a;
  }
  return PolySpline::polynomial(order_, std::move(b));
}

std::vector<double> FundamentalSystem::jet(const PolySpline& f) const {
  if (f.order() != order_)
    throw std::invalid_argument("spline/system order mismatch");
  std::vector<double> c(static_cast<std::size_t>(order_));
  for (int j = 0; j < order_; ++j)
    c[static_cast<std::size_t>(j)] =
        generalized_trace(f, anchor(), Side::plus, j);
  return c;
}

PolySpline project_null(const PolySpline& f, const FundamentalSystem& sys) {
  std::vector<double> c = sys.jet(f);
  int N = sys.order();
  double a = sys.anchor();
  // b_i = sum_{j>=i} c_j (-a)^{j-i}/(j-i)!
  std::vector<double> b(static_cast<std::size_t>(N), 0.0);
  for (int i = 0; i < N; ++i) {
    double pw = 1.0;
    for (int j = i; j < N; ++j) {
      b[static_cast<std::size_t>(i)] +=
          c[static_cast<std::size_t>(j)] * pw / factorial(j - i);
      pw *= -a;
    }
  }
  return PolySpline::polynomial(N, std::move(b));
}

PolySpline right_inverse(const SignedMeasure& mu,
                         const FundamentalSystem& sys) {
  if (!mu.purely_atomic())
    throw std::invalid_argument(
        "right_inverse requires a purely atomic measure");
  for (const Atom& a : mu.atoms())
    if (!sys.domain().contains(a.location))
      throw std::invalid_argument("atom outside K (locality violation)");
  std::vector<Knot> knots;
  knots.reserve(mu.atoms().size());
  for (const Atom& a : mu.atoms())
    knots.push_back(Knot{a.location, a.weight});
  PolySpline g0(sys.order(), {}, std::move(knots));
  return add(g0, scale(project_null(g0, sys), -1.0));
}

double kernel(const FundamentalSystem& sys, double t, double tau, Side side) {
  int N = sys.order();
  double a = sys.anchor();
  double v = greens(N, t - tau, side);
  if (tau > a) return v;  // interior: locally shift-invariant
  double shifted = 1.0;  // (t-a)^j/j!, j = 0
  for (int j = 0; j < N; ++j) {
    v -= shifted * greens(N - j, a - tau, Side::plus);
    shifted *= (t - a) / (j + 1);
  }
  return v;
}

double gbv_norm(const PolySpline& f, const FundamentalSystem& sys) {
  double n = tv_norm(derivative_measure(f));
  for (double c : sys.jet(f)) n += std::abs(c);
  return n;
}

}  // namespace bvsamp
