#include "bvsamp/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace bvsamp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Two-phase primal simplex with Bland's rule.
//   min c^T x  s.t.  A x = b, x >= 0
// Dense tableau; desk-scale problems only.
// ---------------------------------------------------------------------------

class Simplex {
 public:
  static Eigen::VectorXd solve(Eigen::MatrixXd A, Eigen::VectorXd b,
                               const Eigen::VectorXd& c) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    for (int i = 0; i < m; ++i)
      if (b(i) < 0.0) {
        A.row(i) = -A.row(i);
        b(i) = -b(i);
      }

    // Phase 1 tableau: [A | I | b], artificial basis.
    Eigen::MatrixXd T(m, n + m + 1);
    T.leftCols(n) = A;
    T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    T.col(n + m) = b;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + m);
    c1.tail(m).setOnes();
    run(T, basis, c1, n + m);

    double art = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n) art += T(i, n + m);
    if (art > 1e-7)
      throw InfeasibleProblem("interpolation constraints are infeasible");

    // Pivot artificials out of the basis where possible; remaining
    // artificial-basic rows are redundant and get dropped.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      for (int j = 0; j < n; ++j)
        if (std::abs(T(i, j)) > kPivotTol) {
          pivot(T, basis, i, j);
          break;
        }
    }
    std::vector<int> keep;
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) keep.push_back(i);

    const int m2 = static_cast<int>(keep.size());
    Eigen::MatrixXd T2(m2, n + 1);
    std::vector<int> basis2(m2);
    for (int i = 0; i < m2; ++i) {
      T2.row(i).head(n) = T.row(keep[i]).head(n);
      T2(i, n) = T(keep[i], n + m);
      basis2[i] = basis[keep[i]];
    }

    Eigen::VectorXd c2 = c;
    run(T2, basis2, c2, n);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m2; ++i) x(basis2[i]) = T2(i, n);
    return x;
  }

 private:
  static void pivot(Eigen::MatrixXd& T, std::vector<int>& basis, int row,
                    int col) {
    T.row(row) /= T(row, col);
    for (int i = 0; i < T.rows(); ++i) {
      if (i == row) continue;
      double f = T(i, col);
      if (f != 0.0) T.row(i) -= f * T.row(row);
    }
    basis[row] = col;
  }

  static void run(Eigen::MatrixXd& T, std::vector<int>& basis,
                  const Eigen::VectorXd& cost, int n_enterable) {
    const int m = static_cast<int>(T.rows());
    const int last = static_cast<int>(T.cols()) - 1;
    const long max_pivots = 200000;
    for (long it = 0; it < max_pivots; ++it) {
      // Bland: entering = lowest index with negative reduced cost.
      int enter = -1;
      for (int j = 0; j < n_enterable; ++j) {
        bool basic = false;
        for (int i = 0; i < m; ++i)
          if (basis[i] == j) {
            basic = true;
            break;
          }
        if (basic) continue;
        double r = cost(j);
        for (int i = 0; i < m; ++i) r -= cost(basis[i]) * T(i, j);
        if (r < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > 1e-11) {
          double ratio = T(i, last) / T(i, enter);
          if (ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 &&
               (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) throw SolverError("LP is unbounded");
      pivot(T, basis, leave, enter);
    }
    throw ConvergenceFailure("simplex pivot limit exceeded");
  }
};

// ---------------------------------------------------------------------------
// Design-matrix machinery
// ---------------------------------------------------------------------------

struct Design {
  FundamentalSystem sys;
  std::vector<int> visible;  // visible null-direction indices
  std::vector<double> positions;
  Eigen::MatrixXd A;  // M x (visible.size() + positions.size())
  int n_null() const { return static_cast<int>(visible.size()); }
  int n_knots() const { return static_cast<int>(positions.size()); }
};

Eigen::MatrixXd null_columns(const std::vector<Measurement>& ms,
                             const FundamentalSystem& sys) {
  const int M = static_cast<int>(ms.size());
  const int N = sys.order();
  Eigen::MatrixXd B(M, N);
  for (int j = 0; j < N; ++j) {
    PolySpline pj = sys.null_basis(j);
    for (int m = 0; m < M; ++m) B(m, j) = apply(ms[m], pj);
  }
  return B;
}

Design build_design(const Problem& p, const FundamentalSystem& sys,
                    std::vector<double> positions, WellposedReport& report) {
  Design d{sys, {}, {}, {}};
  const int M = static_cast<int>(p.measurements.size());
  Eigen::MatrixXd B = null_columns(p.measurements, sys);
  for (int j = 0; j < sys.order(); ++j)
    if (B.col(j).cwiseAbs().maxCoeff() > 1e-12) d.visible.push_back(j);

  for (double tau : positions) {
    if (sys.domain().contains(tau))
      d.positions.push_back(tau);
    else
      report.warnings.push_back("candidate knot " + fmt(tau) +
                                " dropped: outside K");
  }

  d.A.resize(M, d.n_null() + d.n_knots());
  for (int j = 0; j < d.n_null(); ++j) d.A.col(j) = B.col(d.visible[j]);
  for (int k = 0; k < d.n_knots(); ++k) {
    PolySpline gk = right_inverse(SignedMeasure::dirac(d.positions[k]), sys);
    for (int m = 0; m < M; ++m) d.A(m, d.n_null() + k) =
        apply(p.measurements[m], gk);
  }
  return d;
}

std::vector<double> loss_weights(const Problem& p) {
  const std::size_t M = p.measurements.size();
  if (!p.loss.weights.empty()) return p.loss.weights;
  return std::vector<double>(M, 1.0);
}

Solution assemble(const Problem& p, const Design& d,
                  const Eigen::VectorXd& x, const WellposedReport& report,
                  double prune_tol) {
  const FundamentalSystem& sys = d.sys;
  PolySpline f = PolySpline::zero(sys.order());
  for (int j = 0; j < d.n_null(); ++j)
    if (x(j) != 0.0) f = add(f, scale(sys.null_basis(d.visible[j]), x(j)));
  std::vector<Atom> atoms;
  for (int k = 0; k < d.n_knots(); ++k) {
    double w = x(d.n_null() + k);
    if (std::abs(w) > prune_tol) atoms.push_back(Atom{d.positions[k], w});
  }
  if (!atoms.empty())
    f = add(f, right_inverse(SignedMeasure::from_atoms(std::move(atoms)), sys));

  Solution s;
  s.spline = f;
  s.knot_count = static_cast<int>(f.knots().size());
  s.report = report;
  s.residuals.resize(p.measurements.size());
  for (std::size_t m = 0; m < p.measurements.size(); ++m)
    s.residuals[m] = apply(p.measurements[m], f) - p.y[m];

  double tv = tv_norm(derivative_measure(f));
  if (p.loss.kind == LossKind::squared) {
    double e = 0.0;
    std::vector<double> w = loss_weights(p);
    for (std::size_t m = 0; m < s.residuals.size(); ++m)
      e += w[m] * s.residuals[m] * s.residuals[m];
    s.cost = e + p.lambda * tv;
  } else {
    s.cost = tv;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Penalized path: proximal gradient with a KKT-verified polish step
// ---------------------------------------------------------------------------

double smooth_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
  Eigen::VectorXd r = A * x - y;
  return (w.array() * r.array().square()).sum();
}

// Least-squares polish on a fixed support with fixed signs; returns the
// candidate iterate or nothing when the KKT conditions do not hold.
std::optional<Eigen::VectorXd> try_polish(const Eigen::MatrixXd& A,
                                          const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& w,
                                          double lambda, int n_null,
                                          const Eigen::VectorXd& x) {
  const int n = static_cast<int>(A.cols());
  std::vector<int> cols;
  std::vector<double> sign;
  for (int j = 0; j < n_null; ++j) {
    cols.push_back(j);
    sign.push_back(0.0);
  }
  for (int j = n_null; j < n; ++j)
    if (x(j) != 0.0) {
      cols.push_back(j);
      sign.push_back(x(j) > 0.0 ? 1.0 : -1.0);
    }
  const int ns = static_cast<int>(cols.size());
  if (ns == 0) return Eigen::VectorXd::Zero(n);

  Eigen::MatrixXd B(A.rows(), ns);
  Eigen::VectorXd sgn(ns);
  for (int j = 0; j < ns; ++j) {
    B.col(j) = A.col(cols[j]);
    sgn(j) = sign[j];
  }
  Eigen::MatrixXd H = 2.0 * B.transpose() * w.asDiagonal() * B;
  Eigen::VectorXd rhs = 2.0 * B.transpose() * (w.asDiagonal() * y) -
                        lambda * sgn;
  Eigen::VectorXd z = H.colPivHouseholderQr().solve(rhs);
  if (!(H * z - rhs).isZero(1e-7 * (1.0 + rhs.norm()))) return std::nullopt;

  Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < ns; ++j) {
    if (sgn(j) != 0.0 && z(j) * sgn(j) < -1e-12) return std::nullopt;
    xp(cols[j]) = z(j);
  }

  // KKT: vanishing gradient on the null block and the active support,
  // subgradient bound off-support.
  Eigen::VectorXd grad =
      2.0 * A.transpose() * (w.asDiagonal() * (A * xp - y));
  double scale = 1.0 + y.cwiseAbs().maxCoeff() + lambda;
  for (int j = 0; j < n; ++j) {
    if (j < n_null) {
      if (std::abs(grad(j)) > 1e-8 * scale) return std::nullopt;
    } else if (xp(j) != 0.0) {
      if (std::abs(grad(j) + lambda * (xp(j) > 0.0 ? 1.0 : -1.0)) >
          1e-8 * scale)
        return std::nullopt;
    } else {
      if (std::abs(grad(j)) > lambda + 1e-8 * scale) return std::nullopt;
    }
  }
  return xp;
}

Eigen::VectorXd prox_gradient(const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& y,
                              const Eigen::VectorXd& w, double lambda,
                              int n_null, const SolveOptions& opts) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0) return x;

  // Row-norm bound on the curvature of the smooth part.
  double L = 0.0;
  for (int m = 0; m < A.rows(); ++m)
    L += 2.0 * w(m) * A.row(m).squaredNorm();
  if (L == 0.0) return x;
  double gamma = 1.0 / L;

  double tol = std::max(opts.tol, 1e-14);
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd grad =
        2.0 * A.transpose() * (w.asDiagonal() * (A * x - y));
    Eigen::VectorXd xn(n);
    double g0 = smooth_objective(A, y, w, x);
    for (;;) {
      for (int j = 0; j < n; ++j) {
        double v = x(j) - gamma * grad(j);
        if (j >= n_null) {
          double th = lambda * gamma;
          v = (v > th) ? v - th : (v < -th ? v + th : 0.0);
        }
        xn(j) = v;
      }
      Eigen::VectorXd dlt = xn - x;
      double q = g0 + grad.dot(dlt) + dlt.squaredNorm() / (2.0 * gamma);
      if (smooth_objective(A, y, w, xn) <= q + 1e-12 * (1.0 + std::abs(q)))
        break;
      gamma *= 0.5;  // backtracking (the row-norm bound rarely fails)
    }

    double step = (xn - x).cwiseAbs().maxCoeff();
    x = xn;
    if (step < tol || (it % 50 == 49)) {
      if (auto polished = try_polish(A, y, w, lambda, n_null, x))
        return *polished;
      if (step < tol) return x;
    }
  }
  if (auto polished = try_polish(A, y, w, lambda, n_null, x)) return *polished;
  throw ConvergenceFailure("proximal gradient did not converge");
}

// ---------------------------------------------------------------------------
// Interpolation path: exact LP  min ||a||_1  s.t.  A [eta; a] = y
// ---------------------------------------------------------------------------

Eigen::VectorXd interpolation_lp(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& y, int n_null) {
  const int M = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  const int K = n - n_null;
  // Columns: a+, a-, eta+, eta-.
  Eigen::MatrixXd S(M, 2 * K + 2 * n_null);
  S.leftCols(K) = A.rightCols(K);
  S.middleCols(K, K) = -A.rightCols(K);
  S.middleCols(2 * K, n_null) = A.leftCols(n_null);
  S.rightCols(n_null) = -A.leftCols(n_null);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * K + 2 * n_null);
  c.head(2 * K).setOnes();

  Eigen::VectorXd xs = Simplex::solve(S, y, c);
  Eigen::VectorXd x(n);
  for (int j = 0; j < n_null; ++j) x(j) = xs(2 * K + j) - xs(2 * K + n_null + j);
  for (int k = 0; k < K; ++k) x(n_null + k) = xs(k) - xs(K + k);
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

FundamentalSystem Problem::resolved_system() const {
  if (domain) return FundamentalSystem(order, *domain);
  return FundamentalSystem::default_for(order, min_abscissa());
}

bool Problem::top_order_only() const {
  return std::all_of(measurements.begin(), measurements.end(),
                     [](const Measurement& m) { return m.top_order_only(); });
}

double Problem::min_abscissa() const {
  double v = std::numeric_limits<double>::infinity();
  for (const Measurement& m : measurements) v = std::min(v, m.min_abscissa());
  return v;
}

double Problem::max_abscissa() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const Measurement& m : measurements) v = std::max(v, m.max_abscissa());
  return v;
}

void Problem::validate() const {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (measurements.empty())
    throw std::invalid_argument("at least one measurement is required");
  if (y.size() != measurements.size())
    throw std::invalid_argument("data vector length must match measurements");
  for (const Measurement& m : measurements)
    if (m.order() != order)
      throw std::invalid_argument("measurement order mismatch");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite data");
  if (!p_weights_ok())
    throw std::invalid_argument("squared-loss weights must be positive and "
                                "match the number of measurements");
  if (!std::isfinite(lambda)) throw std::invalid_argument("non-finite lambda");
  if (grid)
    for (double g : *grid)
      if (!std::isfinite(g))
        throw std::invalid_argument("non-finite grid position");
}

bool Problem::p_weights_ok() const {
  if (loss.kind != LossKind::squared || loss.weights.empty()) return true;
  if (loss.weights.size() != measurements.size()) return false;
  return std::all_of(loss.weights.begin(), loss.weights.end(),
                     [](double w) { return w > 0.0; });
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

WellposedReport check_wellposedness(const Problem& p) {
  p.validate();
  WellposedReport rep;
  if (p.loss.kind == LossKind::squared && !(p.lambda > 0.0)) {
    rep.lambda_ok = false;
    rep.warnings.push_back("lambda must be > 0 for penalized losses");
  }
  rep.loss_ok = true;  // supported loss kinds are convex and coercive

  FundamentalSystem sys = p.resolved_system();
  Eigen::MatrixXd B = null_columns(p.measurements, sys);
  for (int j = 0; j < sys.order(); ++j)
    if (B.col(j).cwiseAbs().maxCoeff() <= 1e-12) {
      rep.invisible_null.push_back(j);
      rep.warnings.push_back(
          "null direction p_" + std::to_string(j) +
          " is invisible to all measurements (solution set unbounded)");
    }

  if (p.loss.kind == LossKind::interpolation) {
    // Duplicate functionals with contradictory data.
    for (std::size_t i = 0; i < p.measurements.size(); ++i)
      for (std::size_t j = i + 1; j < p.measurements.size(); ++j) {
        const auto& ti = p.measurements[i].terms();
        const auto& tj = p.measurements[j].terms();
        if (ti == tj && std::abs(p.y[i] - p.y[j]) > 1e-12) {
          rep.feasible = false;
          rep.warnings.push_back("infeasible: duplicate measurement " +
                                 std::to_string(i) + "/" + std::to_string(j) +
                                 " with contradictory data");
        }
        if (ti.size() == 1 && tj.size() == 1 &&
            ti[0].functional == tj[0].functional &&
            std::abs(p.y[i] / ti[0].coeff - p.y[j] / tj[0].coeff) > 1e-12) {
          rep.feasible = false;
          rep.warnings.push_back("infeasible: functional at t=" +
                                 fmt(ti[0].functional.t) +
                                 " constrained to two different values");
        }
      }
  }
  return rep;
}

std::vector<CandidateKnot> candidate_knots(const Problem& p) {
  p.validate();
  if (!p.top_order_only())
    throw std::invalid_argument(
        "exact candidate reduction requires all terms at d = N-1; "
        "supply a grid for mixed-order problems");

  const int M = static_cast<int>(p.measurements.size());
  auto activation = [&](double tau) {
    std::vector<double> act(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
      double v = 0.0;
      for (const Measurement::Term& term : p.measurements[m].terms())
        v += term.coeff *
             greens(1, term.functional.t - tau, term.functional.side);
      act[static_cast<std::size_t>(m)] = v;
    }
    return act;
  };

  std::vector<double> absc;
  for (const Measurement& m : p.measurements)
    for (const Measurement::Term& t : m.terms())
      absc.push_back(t.functional.t);
  std::sort(absc.begin(), absc.end());
  absc.erase(std::unique(absc.begin(), absc.end()), absc.end());

  // kind 0 = abscissa, 1 = midpoint, 2 = outer; lower kind wins a class.
  std::vector<std::pair<double, int>> cands;
  for (double t : absc) cands.emplace_back(t, 0);
  for (std::size_t i = 0; i + 1 < absc.size(); ++i)
    cands.emplace_back(0.5 * (absc[i] + absc[i + 1]), 1);
  cands.emplace_back(absc.front() - 1.0, 2);
  cands.emplace_back(absc.back() + 1.0, 2);
  std::stable_sort(cands.begin(), cands.end(),
                   [](const auto& a, const auto& b) {
                     return a.second < b.second;
                   });

  std::map<std::vector<double>, double> classes;
  for (const auto& [pos, kind] : cands) classes.try_emplace(activation(pos), pos);

  std::vector<CandidateKnot> out;
  for (auto& [act, pos] : classes) out.push_back(CandidateKnot{pos, act});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.position < b.position;
  });
  return out;
}

namespace {

Solution solve_on_positions(const Problem& p, const FundamentalSystem& sys,
                            std::vector<double> positions,
                            WellposedReport report, const SolveOptions& opts) {
  Design d = build_design(p, sys, std::move(positions), report);
  const auto M = p.measurements.size();
  Eigen::VectorXd y(M);
  for (std::size_t m = 0; m < M; ++m) y(m) = p.y[m];

  Eigen::VectorXd x;
  if (p.loss.kind == LossKind::squared) {
    std::vector<double> wv = loss_weights(p);
    Eigen::VectorXd w(M);
    for (std::size_t m = 0; m < M; ++m) w(m) = wv[m];
    x = prox_gradient(d.A, y, w, p.lambda, d.n_null(), opts);
  } else {
    x = interpolation_lp(d.A, y, d.n_null());
  }
  Solution s = assemble(p, d, x, report, std::max(opts.tol, 0.0));
  if (p.loss.kind == LossKind::interpolation) {
    for (double r : s.residuals)
      if (std::abs(r) > kFeasTol)
        throw InfeasibleProblem("interpolation residual " + fmt(r) +
                                " exceeds tolerance");
  }
  return s;
}

}  // namespace

Solution solve(const Problem& p, const SolveOptions& opts) {
  WellposedReport report = check_wellposedness(p);
  if (!report.ok()) {
    if (!opts.ignore_wellposedness) {
      if (!report.feasible)
        throw InfeasibleProblem("problem is infeasible; see report");
      throw std::invalid_argument("ill-posed problem; see report");
    }
    report.warnings.push_back("well-posedness failure overridden by caller");
  }

  FundamentalSystem sys = p.resolved_system();
  std::vector<double> positions;
  if (p.top_order_only()) {
    for (const CandidateKnot& c : candidate_knots(p))
      positions.push_back(c.position);
  } else if (p.grid) {
    positions = *p.grid;
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()),
                    positions.end());
    report.grid_approximate = true;
    report.warnings.push_back(
        "grid-approximate: mixed-order measurements, knots restricted to "
        "the supplied grid");
  } else {
    throw std::invalid_argument(
        "mixed-order problems require an explicit grid");
  }
  return solve_on_positions(p, sys, std::move(positions), std::move(report),
                            opts);
}

Solution oracle_solve(const Problem& p, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be > 0");
  WellposedReport report = check_wellposedness(p);
  if (!report.ok()) {
    if (!report.feasible) throw InfeasibleProblem("problem is infeasible");
    throw std::invalid_argument("ill-posed problem");
  }

  double lo = p.min_abscissa() - 1.0;
  double hi = p.max_abscissa() + 1.0;
  double span = hi - lo;
  double count = std::floor(span / grid_step) + 1.0;
  if (2.0 * count > 1e6)
    throw ScaleGuardExceeded("oracle grid exceeds 10^6 candidates");

  // Each grid point gets an eps-shifted twin so one-sided activations at
  // the abscissae are represented.
  std::vector<double> positions;
  positions.reserve(static_cast<std::size_t>(2.0 * count));
  double eps = grid_step / 4.0;
  for (long i = 0; i < static_cast<long>(count); ++i) {
    double t = lo + grid_step * static_cast<double>(i);
    positions.push_back(t);
    positions.push_back(t + eps);
  }

  FundamentalSystem sys = p.resolved_system();
  Design d = build_design(p, sys, std::move(positions), report);
  const auto M = p.measurements.size();
  Eigen::VectorXd y(M);
  for (std::size_t m = 0; m < M; ++m) y(m) = p.y[m];

  Eigen::VectorXd x;
  if (p.loss.kind == LossKind::interpolation) {
    x = interpolation_lp(d.A, y, d.n_null());
  } else {
    // Cyclic coordinate descent with exact per-coordinate soft threshold.
    std::vector<double> wv = loss_weights(p);
    Eigen::VectorXd w(M);
    for (std::size_t m = 0; m < M; ++m) w(m) = wv[m];
    const int n = static_cast<int>(d.A.cols());
    x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q(n);
    for (int j = 0; j < n; ++j)
      q(j) = (w.array() * d.A.col(j).array().square()).sum();
    Eigen::VectorXd r = -y;  // A x - y at x = 0
    const int max_sweeps = 20000;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double delta = 0.0;
      for (int j = 0; j < n; ++j) {
        if (q(j) == 0.0) continue;
        double rho =
            q(j) * x(j) - (w.array() * d.A.col(j).array() * r.array()).sum();
        double xj;
        if (j < d.n_null()) {
          xj = rho / q(j);
        } else {
          double th = 0.5 * p.lambda;
          xj = (rho > th) ? (rho - th) / q(j)
                          : (rho < -th ? (rho + th) / q(j) : 0.0);
        }
        double dx = xj - x(j);
        if (dx != 0.0) {
          r += d.A.col(j) * dx;
          x(j) = xj;
          delta = std::max(delta, std::abs(dx));
        }
      }
      if (delta < 1e-13 * (1.0 + x.cwiseAbs().maxCoeff())) break;
    }
  }
  return assemble(p, d, x, report, 0.0);
}

std::vector<Solution> enumerate_extreme_points(const Problem& p,
                                               const ExtremeOptions& opts) {
  p.validate();
  const int M = static_cast<int>(p.measurements.size());
  if (M > 4)
    throw ScaleGuardExceeded("extreme-point enumeration limited to M <= 4");

  // Reduce to an equality system at the optimum.
  Solution base = solve(p);
  std::vector<double> ydata(p.y);
  double vstar;
  if (p.loss.kind == LossKind::squared) {
    for (std::size_t m = 0; m < ydata.size(); ++m)
      ydata[m] += base.residuals[m];
    vstar = tv_norm(derivative_measure(base.spline));
  } else {
    vstar = base.cost;
  }

  FundamentalSystem sys = p.resolved_system();
  std::vector<double> positions;
  for (const CandidateKnot& c : candidate_knots(p))
    positions.push_back(c.position);
  WellposedReport report = check_wellposedness(p);
  Design d = build_design(p, sys, std::move(positions), report);
  const int K = d.n_knots();
  if (K > 16)
    throw ScaleGuardExceeded(
        "extreme-point enumeration limited to 16 candidates");
  const int nv = d.n_null();
  int max_support = opts.max_support >= 0 ? opts.max_support : M;
  max_support = std::min(max_support, K);

  Eigen::VectorXd yd(M);
  for (int m = 0; m < M; ++m) yd(m) = ydata[static_cast<std::size_t>(m)];

  std::vector<Solution> out;
  std::set<std::vector<long long>> seen;

  // All supports of size <= max_support, all sign patterns; a vertex is the
  // unique solution of (measurements + cost row) restricted to its support.
  for (unsigned mask = 0; mask < (1u << K); ++mask) {
    int sz = __builtin_popcount(mask);
    if (sz > max_support) continue;
    std::vector<int> supp;
    for (int k = 0; k < K; ++k)
      if (mask & (1u << k)) supp.push_back(k);

    for (unsigned smask = 0; smask < (1u << sz); ++smask) {
      const int unknowns = nv + sz;
      Eigen::MatrixXd B(M + 1, unknowns);
      Eigen::VectorXd rhs(M + 1);
      B.setZero();
      for (int m = 0; m < M; ++m) {
        for (int j = 0; j < nv; ++j) B(m, j) = d.A(m, j);
        for (int i = 0; i < sz; ++i) B(m, nv + i) = d.A(m, nv + supp[i]);
        rhs(m) = yd(m);
      }
      for (int i = 0; i < sz; ++i)
        B(M, nv + i) = (smask & (1u << i)) ? -1.0 : 1.0;
      rhs(M) = vstar;

      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
      qr.setThreshold(1e-9);
      if (qr.rank() < unknowns) continue;  // not pinned: no vertex here
      Eigen::VectorXd z = qr.solve(rhs);
      if ((B * z - rhs).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + rhs.norm()))
        continue;
      bool sign_ok = true;
      for (int i = 0; i < sz; ++i) {
        double s = (smask & (1u << i)) ? -1.0 : 1.0;
        if (z(nv + i) * s < -1e-10) sign_ok = false;
      }
      if (!sign_ok) continue;

      Eigen::VectorXd xf = Eigen::VectorXd::Zero(nv + K);
      for (int j = 0; j < nv; ++j) xf(j) = z(j);
      for (int i = 0; i < sz; ++i) {
        double v = z(nv + i);
        if (std::abs(v) < 1e-11) v = 0.0;
        xf(nv + supp[i]) = v;
      }
      std::vector<long long> key;
      key.reserve(static_cast<std::size_t>(nv + K));
      for (int j = 0; j < nv + K; ++j)
        key.push_back(std::llround(xf(j) * 1e8));
      if (!seen.insert(key).second) continue;

      Problem q = p;
      q.y = ydata;
      q.loss = Loss::interpolation();
      Solution s = assemble(q, d, xf, report, 0.0);
      bool feasible = true;
      for (double r : s.residuals)
        if (std::abs(r) > 1e-8 * (1.0 + std::abs(vstar))) feasible = false;
      if (!feasible) continue;
      if (s.cost > vstar + 1e-9 * (1.0 + vstar)) continue;
      if (s.knot_count > M) continue;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace bvsamp
