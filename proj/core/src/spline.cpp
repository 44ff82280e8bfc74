#include "bvsamp/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bvsamp {

namespace {

std::vector<Knot> canonical_knots(std::vector<Knot> knots) {
  for (const Knot& k : knots) {
    if (!std::isfinite(k.location) || !std::isfinite(k.weight))
      throw std::invalid_argument("knot with non-finite location or weight");
  }
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) {
    return a.location < b.location;
  });
  std::vector<Knot> out;
  for (const Knot& k : knots) {
    if (!out.empty() && out.back().location == k.location)
      out.back().weight += k.weight;
    else
      out.push_back(k);
  }
  std::erase_if(out, [](const Knot& k) { return k.weight == 0.0; });
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_{m >= 0} c_{d+m} t^m / m!, via a Horner-like recurrence. Exact at
// t = 0 (returns c_d).
double poly_jet_eval(const std::vector<double>& c, int d, double t) {
  int top = static_cast<int>(c.size()) - 1;
  if (d > top) return 0.0;
  double acc = 0.0;
  for (int m = top - d; m >= 1; --m) acc = (c[d + m] + acc) * t / m;
  return c[d] + acc;
}

}  // namespace

PolySpline::PolySpline(int order, std::vector<double> null_coeffs,
                       std::vector<Knot> knots)
    : order_(order),
      null_coeffs_(std::move(null_coeffs)),
      knots_(canonical_knots(std::move(knots))) {
  if (order_ < 1) throw std::invalid_argument("spline order must be >= 1");
  if (static_cast<int>(null_coeffs_.size()) > order_)
    throw std::invalid_argument("too many null-space coefficients");
  null_coeffs_.resize(static_cast<std::size_t>(order_), 0.0);
  for (double b : null_coeffs_)
    if (!std::isfinite(b))
      throw std::invalid_argument("non-finite null-space coefficient");
}

PolySpline PolySpline::zero(int order) { return PolySpline(order, {}, {}); }

PolySpline PolySpline::polynomial(int order, std::vector<double> null_coeffs) {
  return PolySpline(order, std::move(null_coeffs), {});
}

PolySpline PolySpline::greens_shift(int order, double tau, double weight) {
  return PolySpline(order, {}, {Knot{tau, weight}});
}

bool PolySpline::is_zero() const {
  if (!knots_.empty()) return false;
  return std::all_of(null_coeffs_.begin(), null_coeffs_.end(),
                     [](double b) { return b == 0.0; });
}

double PolySpline::knot_weight_at(double location) const {
  auto it = std::lower_bound(
      knots_.begin(), knots_.end(), location,
      [](const Knot& k, double loc) { return k.location < loc; });
  if (it != knots_.end() && it->location == location) return it->weight;
  return 0.0;
}

double greens(int order, double x, Side side) {
  if (order < 1) throw std::invalid_argument("greens: order must be >= 1");
  if (order == 1) {
    if (x < 0.0) return 0.0;
    if (x > 0.0) return 1.0;
    return side == Side::plus ? 1.0 : 0.0;
  }
  if (x <= 0.0) return 0.0;
  double p = 1.0;
  for (int i = 0; i < order - 1; ++i) p *= x;
  return p / factorial(order - 1);
}

double generalized_trace(const PolySpline& f, double t, Side side, int d) {
  if (d < 0 || d >= f.order())
    throw std::invalid_argument("derivative order d must be in [0, N-1]");
  double v = poly_jet_eval(f.null_coeffs(), d, t);
  for (const Knot& k : f.knots())
    v += k.weight * greens(f.order() - d, t - k.location, side);
  return v;
}

double eval_trace(const PolySpline& f, double t, Side side) {
  return generalized_trace(f, t, side, 0);
}

SignedMeasure derivative_measure(const PolySpline& f) {
  std::vector<Atom> atoms;
  atoms.reserve(f.knots().size());
  for (const Knot& k : f.knots()) atoms.push_back(Atom{k.location, k.weight});
  return SignedMeasure::from_atoms(std::move(atoms));
}

PolySpline add(const PolySpline& f, const PolySpline& g) {
  if (f.order() != g.order())
    throw std::invalid_argument("cannot add splines of different order");
  std::vector<double> b = f.null_coeffs();
  for (std::size_t j = 0; j < b.size(); ++j) b[j] += g.null_coeffs()[j];
  std::vector<Knot> knots = f.knots();
  knots.insert(knots.end(), g.knots().begin(), g.knots().end());
  return PolySpline(f.order(), std::move(b), std::move(knots));
}

PolySpline scale(const PolySpline& f, double s) {
  std::vector<double> b = f.null_coeffs();
  for (double& x : b) x *= s;
  std::vector<Knot> knots = f.knots();
  for (Knot& k : knots) k.weight *= s;
  return PolySpline(f.order(), std::move(b), std::move(knots));
}

}  // namespace bvsamp
