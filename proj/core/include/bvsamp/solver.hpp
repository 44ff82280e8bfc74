#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bvsamp/sampling.hpp"
#include "bvsamp/spline.hpp"
#include "bvsamp/system.hpp"

namespace bvsamp {

class SolverError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Contradictory or unsatisfiable constraints.
class InfeasibleProblem : public SolverError {
  using SolverError::SolverError;
};

/// Desk-scale guard exceeded (extreme-point enumeration, oracle grid).
class ScaleGuardExceeded : public SolverError {
  using SolverError::SolverError;
};

class ConvergenceFailure : public SolverError {
  using SolverError::SolverError;
};

enum class LossKind { squared, interpolation };

struct Loss {
  LossKind kind = LossKind::squared;
  /// Per-measurement positive weights; empty means all ones. Unused for
  /// interpolation.
  std::vector<double> weights;

  static Loss squared(std::vector<double> weights = {}) {
    return Loss{LossKind::squared, std::move(weights)};
  }
  static Loss interpolation() { return Loss{LossKind::interpolation, {}}; }
};

/// min_f E(nu(f), y) + lambda ||D^N f||_M over GBV, with nu built from
/// generalized trace functionals.
struct Problem {
  int order = 1;
  std::optional<Interval> domain;  ///< K; defaulted when absent
  std::vector<Measurement> measurements;
  std::vector<double> y;
  Loss loss;
  double lambda = 1.0;  ///< ignored for interpolation loss
  /// Candidate knot grid for mixed-order (approximate) mode.
  std::optional<std::vector<double>> grid;

  FundamentalSystem resolved_system() const;
  bool top_order_only() const;
  double min_abscissa() const;
  double max_abscissa() const;
  void validate() const;
  bool p_weights_ok() const;
};

struct WellposedReport {
  bool lambda_ok = true;
  bool loss_ok = true;
  bool feasible = true;
  /// Null directions p_j annihilated by every measurement (the solution
  /// set is unbounded along them).
  std::vector<int> invisible_null;
  bool grid_approximate = false;
  std::vector<std::string> warnings;

  bool ok() const { return lambda_ok && loss_ok && feasible; }
};

struct CandidateKnot {
  double position;
  /// Entry m: the m-th measurement (top-order terms) applied to
  /// u_N(. - position).
  std::vector<double> activation;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 500000;
  std::uint64_t seed = 0;
  bool ignore_wellposedness = false;
};

struct Solution {
  PolySpline spline = PolySpline::zero(1);
  double cost = 0.0;
  int knot_count = 0;
  std::vector<double> residuals;
  WellposedReport report;
};

/// One representative knot position per activation-equivalence class
/// (exact mode; requires all terms at d = N-1).
std::vector<CandidateKnot> candidate_knots(const Problem& p);

Solution solve(const Problem& p, const SolveOptions& opts = {});

/// Brute-force reference: same objective with knots fixed on a uniform grid
/// of pitch `grid_step` (each point doubled with an eps-shifted twin),
/// minimized by cyclic coordinate descent (squared loss) or a grid LP
/// (interpolation). Deterministic.
Solution oracle_solve(const Problem& p, double grid_step);

struct ExtremeOptions {
  int max_support = -1;  ///< default: number of measurements
};

/// Vertices of the solution polytope; every returned solution has
/// knot_count <= M. Desk-scale only (M <= 4, candidates <= 16).
std::vector<Solution> enumerate_extreme_points(const Problem& p,
                                               const ExtremeOptions& opts = {});

WellposedReport check_wellposedness(const Problem& p);

}  // namespace bvsamp
