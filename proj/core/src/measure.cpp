#include "bvsamp/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dd.hpp"

namespace bvsamp {

namespace {

std::vector<Atom> canonical_atoms(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location) || !std::isfinite(a.weight))
      throw std::invalid_argument("atom with non-finite location or weight");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && out.back().location == a.location)
      out.back().weight += a.weight;
    else
      out.push_back(a);
  }
  std::erase_if(out, [](const Atom& a) { return a.weight == 0.0; });
  return out;
}

// Split all pieces at every endpoint, sum overlapping values, drop zeros,
// and re-merge adjacent pieces with equal value.
std::vector<DensityPiece> canonical_density(std::vector<DensityPiece> pieces) {
  std::erase_if(pieces, [](const DensityPiece& p) { return p.value == 0.0; });
  if (pieces.empty()) return {};
  for (const DensityPiece& p : pieces) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.value))
      throw std::invalid_argument("density piece with non-finite field");
    if (!(p.lo < p.hi))
      throw std::invalid_argument("density piece requires lo < hi");
  }
  std::vector<double> cuts;
  cuts.reserve(2 * pieces.size());
  for (const DensityPiece& p : pieces) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<DensityPiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    double v = 0.0;
    for (const DensityPiece& p : pieces)
      if (p.lo <= lo && hi <= p.hi) v += p.value;
    if (v == 0.0) continue;
    if (!out.empty() && out.back().hi == lo && out.back().value == v)
      out.back().hi = hi;
    else
      out.push_back(DensityPiece{lo, hi, v});
  }
  return out;
}

}  // namespace

SignedMeasure::SignedMeasure(std::vector<Atom> atoms,
                             std::vector<DensityPiece> density)
    : atoms_(canonical_atoms(std::move(atoms))),
      density_(canonical_density(std::move(density))) {}

SignedMeasure SignedMeasure::from_atoms(std::vector<Atom> atoms) {
  return SignedMeasure(std::move(atoms), {});
}

SignedMeasure SignedMeasure::dirac(double location, double weight) {
  return SignedMeasure({Atom{location, weight}}, {});
}

double SignedMeasure::weight_at(double location) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), location,
      [](const Atom& a, double loc) { return a.location < loc; });
  if (it != atoms_.end() && it->location == location) return it->weight;
  return 0.0;
}

SignedMeasure add(const SignedMeasure& a, const SignedMeasure& b) {
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  std::vector<DensityPiece> density = a.density();
  density.insert(density.end(), b.density().begin(), b.density().end());
  return SignedMeasure(std::move(atoms), std::move(density));
}

SignedMeasure scale(const SignedMeasure& mu, double s) {
  std::vector<Atom> atoms = mu.atoms();
  for (Atom& a : atoms) a.weight *= s;
  std::vector<DensityPiece> density = mu.density();
  for (DensityPiece& p : density) p.value *= s;
  return SignedMeasure(std::move(atoms), std::move(density));
}

double tv_norm(const SignedMeasure& mu) {
  double tv = 0.0;
  for (const Atom& a : mu.atoms()) tv += std::abs(a.weight);
  for (const DensityPiece& p : mu.density())
    tv += std::abs(p.value) * (p.hi - p.lo);
  return tv;
}

double cumulative(const SignedMeasure& mu, double t, Side side) {
  double s = 0.0;
  for (const Atom& a : mu.atoms()) {
    if (a.location < t || (side == Side::plus && a.location == t))
      s += a.weight;
    else if (a.location > t)
      break;
  }
  for (const DensityPiece& p : mu.density()) {
    if (p.lo >= t) break;
    s += p.value * (std::min(p.hi, t) - p.lo);
  }
  return s;
}

SignedMeasure restrict(const SignedMeasure& mu, const Interval& K) {
  if (K.empty()) return SignedMeasure();
  std::vector<Atom> atoms;
  for (const Atom& a : mu.atoms())
    if (K.contains(a.location)) atoms.push_back(a);
  std::vector<DensityPiece> density;
  for (const DensityPiece& p : mu.density()) {
    double lo = std::max(p.lo, K.lo);
    double hi = std::min(p.hi, K.hi);
    if (lo < hi) density.push_back(DensityPiece{lo, hi, p.value});
  }
  return SignedMeasure(std::move(atoms), std::move(density));
}

PiecewiseLinearTestFunction::PiecewiseLinearTestFunction(
    std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() != values_.size() || breakpoints_.size() < 2)
    throw std::invalid_argument("need >= 2 breakpoints with matching values");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]))
      throw std::invalid_argument("breakpoints must be strictly increasing");
  if (values_.front() != 0.0 || values_.back() != 0.0)
    throw std::invalid_argument(
        "endpoint values must be 0 (continuity at the hull boundary)");
}

PiecewiseLinearTestFunction PiecewiseLinearTestFunction::hat(double center,
                                                             double halfwidth,
                                                             double peak) {
  if (!(halfwidth > 0.0)) throw std::invalid_argument("halfwidth must be > 0");
  return PiecewiseLinearTestFunction(
      {center - halfwidth, center, center + halfwidth}, {0.0, peak, 0.0});
}

namespace {

detail::dd eval_dd(const std::vector<double>& x, const std::vector<double>& v,
                   double t) {
  using namespace detail;
  if (t <= x.front() || t >= x.back()) return dd(0.0);
  auto it = std::lower_bound(x.begin(), x.end(), t);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (x[i] == t) return dd(v[i]);
  // t in (x[i-1], x[i])
  dd lam = div(two_sum(t, -x[i - 1]), two_sum(x[i], -x[i - 1]));
  return add(dd(v[i - 1]), mul(lam, two_sum(v[i], -v[i - 1])));
}

}  // namespace

double PiecewiseLinearTestFunction::operator()(double t) const {
  return eval_dd(breakpoints_, values_, t).value();
}

double PiecewiseLinearTestFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double PiecewiseLinearTestFunction::integral(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  lo = std::max(lo, breakpoints_.front());
  hi = std::min(hi, breakpoints_.back());
  if (hi <= lo) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    double a = std::max(lo, breakpoints_[i]);
    double b = std::min(hi, breakpoints_[i + 1]);
    if (b <= a) continue;
    s += 0.5 * ((*this)(a) + (*this)(b)) * (b - a);
  }
  return s;
}

double pair_continuous(const PiecewiseLinearTestFunction& g,
                       const SignedMeasure& mu) {
  using namespace detail;
  dd acc(0.0);
  for (const Atom& a : mu.atoms())
    acc = add(acc, mul(dd(a.weight),
                       eval_dd(g.breakpoints(), g.values(), a.location)));
  double dens = 0.0;
  for (const DensityPiece& p : mu.density())
    dens += p.value * g.integral(p.lo, p.hi);
  return add(acc, dd(dens)).value();
}

}  // namespace bvsamp
