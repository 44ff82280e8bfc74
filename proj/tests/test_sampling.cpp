#include <doctest.h>

#include <cmath>
#include <random>

#include "bvsamp/sampling.hpp"

using namespace bvsamp;

TEST_CASE("apply closed forms") {
  PolySpline u = PolySpline::greens_shift(1, 0.0);
  CHECK(apply(Measurement::single(1.0, 0.0, Side::plus, 0, 1), u) == 1.0);
  CHECK(apply(Measurement::single(1.0, 0.0, Side::minus, 0, 1), u) == 0.0);

  PolySpline f(1, {1.0}, {{0.5, 2.0}});
  Measurement diff({{1.0, {1.0, Side::plus, 0, 1}},
                    {-1.0, {0.0, Side::plus, 0, 1}}});
  CHECK(apply(diff, f) == 2.0);
  CHECK_THROWS_AS(apply(diff, PolySpline::zero(2)), std::invalid_argument);
}

TEST_CASE("measurement validation") {
  CHECK_THROWS_AS(Measurement({}), std::invalid_argument);
  CHECK_THROWS_AS(Measurement({{0.0, {0.0, Side::plus, 0, 1}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measurement({{1.0, {0.0, Side::plus, 0, 1}},
                               {1.0, {0.0, Side::plus, 0, 2}}}),
                  std::invalid_argument);
  Measurement m({{1.0, {0.0, Side::plus, 1, 2}},
                 {2.0, {3.0, Side::minus, 0, 2}}});
  CHECK(m.min_abscissa() == 0.0);
  CHECK(m.max_abscissa() == 3.0);
  CHECK_FALSE(m.top_order_only());
  CHECK(Measurement::single(1.0, 0.0, Side::plus, 1, 2).top_order_only());
}

TEST_CASE("continuity_bound closed forms") {
  for (int N : {1, 2, 3}) {
    FundamentalSystem sys(N, Interval::from(-1.0));
    Measurement m = Measurement::single(1.0, 0.5, Side::plus, N - 1, N);
    CHECK(continuity_bound(m, sys) == doctest::Approx(1.0).epsilon(1e-12));
  }
  FundamentalSystem s1(1, Interval::from(-1.0));
  CHECK(continuity_bound(Measurement::single(2.0, 0.5, Side::plus, 0, 1),
                         s1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(continuity_bound(Measurement::single(1.0, 3.0, Side::minus, 0, 1),
                         s1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weakstar_counterexample closed forms") {
  FundamentalSystem sys(1, Interval::from(-2.0));
  auto g = PiecewiseLinearTestFunction::hat(0.0, 1.0);
  WeakstarSample w1 = weakstar_counterexample(1, g, sys);
  CHECK(w1.pairing == 1.0);
  CHECK(w1.trace == 1.0);
  CHECK(w1.jet == std::vector<double>{0.0});
  CHECK(weakstar_counterexample(2, g, sys).pairing == 0.5);
  CHECK(weakstar_counterexample(10, g, sys).pairing ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(weakstar_counterexample(0, g, sys), std::invalid_argument);
}

TEST_CASE("weakstar pairing decreases to zero, trace stays put") {
  FundamentalSystem sys(1, Interval::from(-2.0));
  auto g = PiecewiseLinearTestFunction::hat(0.0, 1.0);
  double prev = 2.0;
  for (int n = 1; n <= 200; ++n) {
    WeakstarSample w = weakstar_counterexample(n, g, sys);
    CHECK(w.pairing < prev);
    CHECK(w.trace == 1.0);
    CHECK(w.jet[0] == 0.0);
    // the whole point: 1/n to full relative precision
    CHECK(std::abs(w.pairing - 1.0 / n) <= 1e-15 / n);
    prev = w.pairing;
  }
}

namespace {

PolySpline random_spline(std::mt19937_64& gen, int order) {
  std::uniform_real_distribution<double> c(-2.0, 2.0), loc(-4.0, 4.0);
  std::uniform_int_distribution<int> nk(0, 4);
  std::vector<double> b(static_cast<std::size_t>(order));
  for (double& v : b) v = c(gen);
  std::vector<Knot> knots;
  for (int i = nk(gen); i > 0; --i) {
    double w = c(gen);
    if (w != 0.0) knots.push_back({loc(gen), w});
  }
  return PolySpline(order, std::move(b), std::move(knots));
}

}  // namespace

TEST_CASE("bound soundness at top order") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> ab(-5.0, 5.0), co(-2.0, 2.0);
  std::uniform_int_distribution<int> ord(1, 3), nt(1, 3);
  for (int i = 0; i < 2000; ++i) {
    int N = ord(gen);
    FundamentalSystem sys(N, Interval::from(-5.0));
    std::vector<Measurement::Term> terms;
    for (int k = nt(gen); k > 0; --k) {
      double c = co(gen);
      if (c == 0.0) c = 1.0;
      terms.push_back({c, {ab(gen), (i % 2) ? Side::plus : Side::minus,
                           N - 1, N}});
    }
    Measurement m{std::move(terms)};
    PolySpline f = random_spline(gen, N);
    CHECK(std::abs(apply(m, f)) <=
          continuity_bound(m, sys) * gbv_norm(f, sys) + 1e-10);
  }
}

TEST_CASE("bound tightness witness") {
  // p_{N-1} has gbv norm 1 and a constant top-order trace of 1, so it
  // attains the bound C = |c| exactly for any single-term top-order
  // functional right of the anchor.
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ab(-5.0, 5.0), co(-2.0, 2.0);
  for (int N : {1, 2, 3}) {
    FundamentalSystem sys(N, Interval::from(-5.0));
    PolySpline witness = sys.null_basis(N - 1);
    for (int i = 0; i < 100; ++i) {
      double c = co(gen);
      if (c == 0.0) c = 1.0;
      Measurement m = Measurement::single(
          c, ab(gen), (i % 2) ? Side::plus : Side::minus, N - 1, N);
      double C = continuity_bound(m, sys);
      CHECK(std::abs(apply(m, witness)) >=
            0.99 * C * gbv_norm(witness, sys));
    }
  }
}

TEST_CASE("apply is linear") {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> sc(-2.0, 2.0), ab(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    int N = 1 + (i % 3);
    PolySpline f = random_spline(gen, N), h = random_spline(gen, N);
    double a = sc(gen), b = sc(gen);
    Measurement m = Measurement::single(
        1.0, ab(gen), (i % 2) ? Side::plus : Side::minus, N - 1, N);
    CHECK(apply(m, add(scale(f, a), scale(h, b))) ==
          doctest::Approx(a * apply(m, f) + b * apply(m, h))
              .epsilon(1e-12));
  }
}
