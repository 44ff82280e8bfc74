#include "bvsamp/selfcheck.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "bvsamp/measure.hpp"
#include "bvsamp/sampling.hpp"
#include "bvsamp/solver.hpp"
#include "bvsamp/spline.hpp"
#include "bvsamp/system.hpp"

namespace bvsamp {

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  bool coin() { return integer(0, 1) == 1; }
  Side side() { return coin() ? Side::plus : Side::minus; }
  double nonzero(double lo, double hi) {
    for (;;) {
      double v = uniform(lo, hi);
      if (v != 0.0) return v;
    }
  }
};

SignedMeasure random_measure(Rng& rng, bool with_density = true) {
  std::vector<Atom> atoms;
  int na = rng.integer(0, 5);
  for (int i = 0; i < na; ++i)
    atoms.push_back(Atom{rng.uniform(-5.0, 5.0), rng.nonzero(-3.0, 3.0)});
  std::vector<DensityPiece> pieces;
  if (with_density) {
    int np = rng.integer(0, 3);
    for (int i = 0; i < np; ++i) {
      double l = rng.uniform(-5.0, 4.0);
      pieces.push_back(DensityPiece{l, l + rng.uniform(0.1, 2.0),
                                    rng.nonzero(-2.0, 2.0)});
    }
  }
  return SignedMeasure(std::move(atoms), std::move(pieces));
}

PolySpline random_spline(Rng& rng, int order, double knot_lo = -4.0,
                         double knot_hi = 4.0) {
  std::vector<double> b(static_cast<std::size_t>(order));
  for (double& v : b) v = rng.uniform(-2.0, 2.0);
  std::vector<Knot> knots;
  int nk = rng.integer(0, 5);
  for (int i = 0; i < nk; ++i)
    knots.push_back(Knot{rng.uniform(knot_lo, knot_hi),
                         rng.nonzero(-3.0, 3.0)});
  return PolySpline(order, std::move(b), std::move(knots));
}

PiecewiseLinearTestFunction random_test_function(Rng& rng) {
  int n = rng.integer(3, 7);
  std::vector<double> x, v;
  double t = rng.uniform(-6.0, -3.0);
  for (int i = 0; i < n; ++i) {
    x.push_back(t);
    t += rng.uniform(0.2, 2.0);
  }
  v.push_back(0.0);
  for (int i = 1; i + 1 < n; ++i) v.push_back(rng.uniform(-2.0, 2.0));
  v.push_back(0.0);
  return PiecewiseLinearTestFunction(std::move(x), std::move(v));
}

std::string describe(const SignedMeasure& mu) {
  std::ostringstream os;
  os.precision(17);
  os << "measure atoms={";
  for (const Atom& a : mu.atoms()) os << "(" << a.location << "," << a.weight << ")";
  os << "} pieces=" << mu.density().size();
  return os.str();
}

class Suite {
 public:
  Suite(std::uint64_t seed, int cases) : seed_(seed), cases_(cases) {}

  template <typename F>
  void check(const std::string& name, F&& body) {
    CheckResult r{name, true, ""};
    if (cases_ > 0) {
      Rng rng(seed_ ^ std::hash<std::string>{}(name));
      try {
        std::string fail = body(rng, cases_);
        if (!fail.empty()) {
          r.passed = false;
          r.detail = fail;
        }
      } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
      }
    }
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::uint64_t seed_;
  int cases_;
  std::vector<CheckResult> results_;
};

}  // namespace

std::vector<CheckResult> run_selfcheck(std::uint64_t seed, int cases) {
  Suite s(seed, cases);

  s.check("measures.tv_triangle_inequality", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      SignedMeasure a = random_measure(rng), b = random_measure(rng);
      if (tv_norm(add(a, b)) > tv_norm(a) + tv_norm(b) + 1e-12)
        return describe(a) + " + " + describe(b);
    }
    return "";
  });

  s.check("measures.cumulative_jump_is_atom", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      SignedMeasure mu = random_measure(rng);
      for (const Atom& a : mu.atoms()) {
        double jump = cumulative(mu, a.location, Side::plus) -
                      cumulative(mu, a.location, Side::minus);
        if (std::abs(jump - a.weight) > 1e-12)
          return describe(mu) + " at atom " + std::to_string(a.location);
      }
      for (int k = 0; k < 100; ++k) {
        double t = rng.uniform(-6.0, 6.0);
        if (mu.weight_at(t) != 0.0) continue;
        if (std::abs(cumulative(mu, t, Side::plus) -
                     cumulative(mu, t, Side::minus)) > 1e-12)
          return describe(mu) + " at t=" + std::to_string(t);
      }
    }
    return "";
  });

  s.check("measures.pairing_bounded_by_tv", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      SignedMeasure mu = random_measure(rng);
      PiecewiseLinearTestFunction g = random_test_function(rng);
      if (std::abs(pair_continuous(g, mu)) >
          g.sup_abs() * tv_norm(mu) + 1e-10)
        return describe(mu);
    }
    return "";
  });

  s.check("measures.restrict_to_line_is_identity",
          [](Rng& rng, int n) -> std::string {
            for (int i = 0; i < n; ++i) {
              SignedMeasure mu = random_measure(rng);
              if (!(restrict(mu, Interval::all()) == mu)) return describe(mu);
            }
            return "";
          });

  s.check("gbv.trace_jump_is_knot_weight", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      PolySpline f = random_spline(rng, 1);
      for (const Knot& k : f.knots()) {
        double jump = eval_trace(f, k.location, Side::plus) -
                      eval_trace(f, k.location, Side::minus);
        if (std::abs(jump - k.weight) > 1e-12)
          return "N=1 spline, knot at " + std::to_string(k.location);
      }
      PolySpline h = random_spline(rng, rng.integer(2, 4));
      double t = rng.uniform(-5.0, 5.0);
      if (std::abs(eval_trace(h, t, Side::plus) -
                   eval_trace(h, t, Side::minus)) > 1e-12)
        return "N>=2 spline discontinuous at t=" + std::to_string(t);
    }
    return "";
  });

  s.check("gbv.trace_equals_cumulative_of_derivative",
          [](Rng& rng, int n) -> std::string {
            for (int i = 0; i < n; ++i) {
              PolySpline f = random_spline(rng, 1);
              double t = rng.uniform(-6.0, 6.0);
              double lhs = eval_trace(f, t, Side::plus);
              double rhs = f.null_coeffs()[0] +
                           cumulative(derivative_measure(f), t, Side::plus);
              if (std::abs(lhs - rhs) > 1e-10)
                return "t=" + std::to_string(t);
            }
            return "";
          });

  s.check("gbv.generalized_trace_d0_is_trace",
          [](Rng& rng, int n) -> std::string {
            for (int i = 0; i < n; ++i) {
              PolySpline f = random_spline(rng, rng.integer(1, 4));
              double t = rng.uniform(-5.0, 5.0);
              Side side = rng.side();
              if (generalized_trace(f, t, side, 0) != eval_trace(f, t, side))
                return "t=" + std::to_string(t);
            }
            return "";
          });

  s.check("gbv.norm_definite_and_subadditive",
          [](Rng& rng, int n) -> std::string {
            for (int i = 0; i < n; ++i) {
              int N = rng.integer(1, 3);
              FundamentalSystem sys(N, Interval::from(-6.0));
              PolySpline f = random_spline(rng, N), g = random_spline(rng, N);
              if ((gbv_norm(f, sys) == 0.0) != f.is_zero()) return "definiteness";
              if (gbv_norm(add(f, g), sys) >
                  gbv_norm(f, sys) + gbv_norm(g, sys) + 1e-10)
                return "triangle";
              double c = rng.uniform(-3.0, 3.0);
              if (std::abs(gbv_norm(scale(f, c), sys) -
                           std::abs(c) * gbv_norm(f, sys)) > 1e-10)
                return "homogeneity c=" + std::to_string(c);
            }
            return "";
          });

  s.check("systems.right_inverse_identity", [](Rng& rng, int n) -> std::string {
    for (int N = 1; N <= 4; ++N) {
      FundamentalSystem sys(N, Interval::from(-6.0));
      for (int i = 0; i < n; ++i) {
        SignedMeasure mu = random_measure(rng, false);
        if (!(derivative_measure(right_inverse(mu, sys)) == mu))
          return "N=" + std::to_string(N) + " " + describe(mu);
      }
    }
    return "";
  });

  s.check("systems.annihilation", [](Rng& rng, int n) -> std::string {
    for (int N = 1; N <= 4; ++N) {
      FundamentalSystem sys(N, Interval::from(-6.0));
      for (int i = 0; i < n; ++i) {
        SignedMeasure mu = random_measure(rng, false);
        for (double c : sys.jet(right_inverse(mu, sys)))
          if (std::abs(c) > 1e-12)
            return "N=" + std::to_string(N) + " jet=" + std::to_string(c);
      }
    }
    return "";
  });

  s.check("systems.canonical_decomposition", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 3);
      FundamentalSystem sys(N, Interval::from(-6.0));
      PolySpline f = random_spline(rng, N);
      PolySpline rec = add(right_inverse(derivative_measure(f), sys),
                           project_null(f, sys));
      for (int k = 0; k < 100; ++k) {
        double t = rng.uniform(-6.0, 6.0);
        Side side = rng.side();
        if (std::abs(eval_trace(f, t, side) - eval_trace(rec, t, side)) >
            1e-10)
          return "N=" + std::to_string(N) + " t=" + std::to_string(t);
      }
    }
    return "";
  });

  s.check("systems.projector_idempotent", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 4);
      FundamentalSystem sys(N, Interval::from(
                                   static_cast<double>(rng.integer(-4, 0))));
      PolySpline pf = project_null(random_spline(rng, N), sys);
      PolySpline ppf = project_null(pf, sys);
      if (!ppf.knots().empty()) return "N=" + std::to_string(N) + " knots";
      for (int j = 0; j < N; ++j) {
        double u = pf.null_coeffs()[static_cast<std::size_t>(j)];
        double v = ppf.null_coeffs()[static_cast<std::size_t>(j)];
        // bitwise at anchor 0; elsewhere the monomial <-> jet round trip
        // is only accurate to roundoff
        bool ok = sys.anchor() == 0.0 ? u == v
                                      : std::abs(u - v) <=
                                            1e-9 * (1.0 + std::abs(u));
        if (!ok) return "N=" + std::to_string(N);
      }
    }
    return "";
  });

  s.check("systems.biorthogonality", [](Rng&, int) -> std::string {
    for (int N = 1; N <= 6; ++N) {
      FundamentalSystem sys(N, Interval::from(0.0));
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          double v = generalized_trace(sys.null_basis(j), sys.anchor(),
                                       Side::plus, i);
          if (v != (i == j ? 1.0 : 0.0))
            return "N=" + std::to_string(N) + " entry (" +
                   std::to_string(i) + "," + std::to_string(j) + ")";
        }
    }
    return "";
  });

  s.check("systems.causality", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 4);
      FundamentalSystem sys(N, Interval::from(-6.0));
      double support_lo = rng.uniform(-6.0, 2.0);
      std::vector<Atom> atoms;
      int na = rng.integer(1, 4);
      for (int k = 0; k < na; ++k)
        atoms.push_back(
            Atom{support_lo + rng.uniform(0.0, 4.0), rng.nonzero(-2.0, 2.0)});
      PolySpline g = right_inverse(SignedMeasure::from_atoms(atoms), sys);
      for (int k = 0; k < 20; ++k) {
        double t = support_lo - rng.uniform(1e-6, 5.0);
        if (std::abs(eval_trace(g, t, Side::plus)) > 1e-12 ||
            std::abs(eval_trace(g, t, Side::minus)) > 1e-12)
          return "N=" + std::to_string(N) + " t=" + std::to_string(t);
      }
    }
    return "";
  });

  s.check("systems.locality", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 3);
      FundamentalSystem sys(N, Interval::from(-6.0));
      double a2 = rng.uniform(-5.0, 0.0);
      FundamentalSystem sys2(N, Interval::from(a2));
      SignedMeasure mu = random_measure(rng, false);
      PolySpline g = right_inverse(mu, sys);
      PolySpline g2 = right_inverse(restrict(mu, Interval::from(a2)), sys2);
      PolySpline diff = add(g, scale(g2, -1.0));
      PolySpline poly = project_null(diff, sys2);
      for (int k = 0; k < 50; ++k) {
        double t = a2 + rng.uniform(0.0, 6.0);
        Side side = rng.side();
        if (std::abs(eval_trace(diff, t, side) - eval_trace(poly, t, side)) >
            1e-10)
          return "N=" + std::to_string(N) + " t=" + std::to_string(t);
      }
    }
    return "";
  });

  s.check("systems.local_shift_invariance", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 4);
      FundamentalSystem sys(N, Interval::from(-6.0));
      double tau = rng.uniform(-5.9, 3.0);
      double h = rng.uniform(0.0, 3.0);
      if (tau <= sys.anchor() || tau + h <= sys.anchor()) continue;
      double t = rng.uniform(-8.0, 8.0);
      Side side = rng.side();
      if (std::abs(kernel(sys, t + h, tau + h, side) -
                   kernel(sys, t, tau, side)) > 1e-12)
        return "tau=" + std::to_string(tau) + " h=" + std::to_string(h);
    }
    return "";
  });

  s.check("sampling.bound_soundness", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 3);
      FundamentalSystem sys(N, Interval::from(-6.0));
      std::vector<Measurement::Term> terms;
      int nt = rng.integer(1, 3);
      for (int k = 0; k < nt; ++k)
        terms.push_back(Measurement::Term{
            rng.nonzero(-2.0, 2.0),
            SamplingFunctional{rng.uniform(-6.0, 6.0), rng.side(), N - 1, N}});
      Measurement m(terms);
      PolySpline f = random_spline(rng, N, -8.0, 8.0);
      if (std::abs(apply(m, f)) >
          continuity_bound(m, sys) * gbv_norm(f, sys) + 1e-10)
        return "N=" + std::to_string(N);
    }
    return "";
  });

  s.check("sampling.linearity", [](Rng& rng, int n) -> std::string {
    for (int i = 0; i < n; ++i) {
      int N = rng.integer(1, 3);
      std::vector<Measurement::Term> terms;
      int nt = rng.integer(1, 3);
      for (int k = 0; k < nt; ++k)
        terms.push_back(Measurement::Term{
            rng.nonzero(-2.0, 2.0),
            SamplingFunctional{rng.uniform(-4.0, 4.0), rng.side(),
                               rng.integer(0, N - 1), N}});
      Measurement m(terms);
      PolySpline f = random_spline(rng, N), g = random_spline(rng, N);
      double alpha = rng.uniform(-2.0, 2.0), beta = rng.uniform(-2.0, 2.0);
      double lhs = apply(m, add(scale(f, alpha), scale(g, beta)));
      double rhs = alpha * apply(m, f) + beta * apply(m, g);
      if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(lhs)))
        return "alpha=" + std::to_string(alpha);
    }
    return "";
  });

  s.check("sampling.weakstar_escape", [](Rng&, int n) -> std::string {
    FundamentalSystem sys(1, Interval::from(-2.0));
    PiecewiseLinearTestFunction g =
        PiecewiseLinearTestFunction::hat(0.0, 1.0);
    double prev = 2.0;
    for (int k = 1; k <= std::min(n, 500); ++k) {
      WeakstarSample w = weakstar_counterexample(k, g, sys);
      if (!(w.pairing < prev) || w.trace != 1.0 || w.jet[0] != 0.0)
        return "n=" + std::to_string(k);
      prev = w.pairing;
    }
    if (prev > 1.0 / std::min(n, 500) + 1e-12) return "no decay";
    return "";
  });

  s.check("solver.objective_consistency_and_determinism",
          [](Rng& rng, int n) -> std::string {
            for (int i = 0; i < std::max(1, n / 20); ++i) {
              int M = rng.integer(1, 4);
              std::vector<Measurement> ms;
              std::vector<double> y;
              for (int m = 0; m < M; ++m) {
                ms.push_back(Measurement::single(1.0, rng.uniform(0.0, 1.0),
                                                 rng.side(), 0, 1));
                y.push_back(rng.uniform(-2.0, 2.0));
              }
              Problem p{1,  std::nullopt, ms, y, Loss::squared(),
                        rng.uniform(0.05, 0.5), std::nullopt};
              Solution s1 = solve(p), s2 = solve(p);
              if (!(s1.spline == s2.spline) || s1.cost != s2.cost)
                return "nondeterministic";
              double e = 0.0;
              for (double r : s1.residuals) e += r * r;
              double re = e + p.lambda * tv_norm(derivative_measure(s1.spline));
              if (std::abs(re - s1.cost) > 1e-12 * (1.0 + s1.cost))
                return "cost mismatch " + std::to_string(re - s1.cost);
            }
            return "";
          });

  return s.take();
}

}  // namespace bvsamp
