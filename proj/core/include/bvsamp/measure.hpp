#pragma once

#include <vector>

#include "bvsamp/interval.hpp"

namespace bvsamp {

struct Atom {
  double location;
  double weight;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Piecewise-constant density piece on [lo, hi).
struct DensityPiece {
  double lo;
  double hi;
  double value;
  friend bool operator==(const DensityPiece&, const DensityPiece&) = default;
};

/// A finite signed measure on the real line: a finite set of atoms plus a
/// piecewise-constant density. Stored in canonical form: atoms sorted by
/// location with colliding atoms merged and zero weights dropped; density
/// pieces sorted, disjoint, with zero-value pieces dropped. Canonical form
/// makes equality bit-exact.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> density);

  static SignedMeasure from_atoms(std::vector<Atom> atoms);
  static SignedMeasure dirac(double location, double weight = 1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& density() const { return density_; }

  bool is_zero() const { return atoms_.empty() && density_.empty(); }
  bool purely_atomic() const { return density_.empty(); }

  /// Weight of the atom at `location`, 0 if none.
  double weight_at(double location) const;

  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> density_;
};

SignedMeasure add(const SignedMeasure& a, const SignedMeasure& b);
SignedMeasure scale(const SignedMeasure& mu, double s);

/// Total variation: sum of |atom weights| plus integral of |density|.
double tv_norm(const SignedMeasure& mu);

/// side = minus: mu((-inf, t)); side = plus: mu((-inf, t]).
double cumulative(const SignedMeasure& mu, double t, Side side);

/// Restriction of mu to K. Atoms are kept iff K contains their location
/// (respecting endpoint open/closedness); density pieces are clipped.
SignedMeasure restrict(const SignedMeasure& mu, const Interval& K);

/// A continuous, compactly supported, piecewise-linear test function.
/// Zero outside the breakpoint hull; the first and last values must be 0.
class PiecewiseLinearTestFunction {
 public:
  PiecewiseLinearTestFunction(std::vector<double> breakpoints,
                              std::vector<double> values);

  /// The unit hat: 0 at center-halfwidth, `peak` at center, 0 at
  /// center+halfwidth.
  static PiecewiseLinearTestFunction hat(double center, double halfwidth,
                                         double peak = 1.0);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double t) const;
  double sup_abs() const;

  /// Exact integral over [lo, hi].
  double integral(double lo, double hi) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// The dual pairing <g, mu>. The atomic part is accumulated in
/// double-double arithmetic so that near-cancelling combinations (the
/// weak* demonstrations) come out with small relative error.
double pair_continuous(const PiecewiseLinearTestFunction& g,
                       const SignedMeasure& mu);

}  // namespace bvsamp
