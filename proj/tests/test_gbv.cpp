#include <doctest.h>

#include <cmath>
#include <random>

#include "bvsamp/spline.hpp"
#include "bvsamp/system.hpp"

using namespace bvsamp;

TEST_CASE("greens traces") {
  CHECK(greens(1, 0.0, Side::minus) == 0.0);
  CHECK(greens(1, 0.0, Side::plus) == 1.0);
  CHECK(greens(1, -0.5, Side::plus) == 0.0);
  CHECK(greens(1, 2.0, Side::minus) == 1.0);
  CHECK(greens(2, 3.0, Side::minus) == 3.0);
  CHECK(greens(2, 3.0, Side::plus) == 3.0);
  CHECK(greens(2, 0.0, Side::plus) == 0.0);
  CHECK(greens(3, 2.0, Side::plus) == 2.0);  // 2^2/2!
  CHECK_THROWS_AS(greens(0, 1.0, Side::plus), std::invalid_argument);
}

TEST_CASE("eval_trace on steps and hinges") {
  PolySpline u = PolySpline::greens_shift(1, 0.0);
  CHECK(eval_trace(u, 0.0, Side::minus) == 0.0);
  CHECK(eval_trace(u, 0.0, Side::plus) == 1.0);

  PolySpline f(1, {1.0}, {{1.0, 2.0}});  // 1 + 2 u(.-1)
  CHECK(eval_trace(f, 1.0, Side::minus) == 1.0);
  CHECK(eval_trace(f, 1.0, Side::plus) == 3.0);

  PolySpline hinge = PolySpline::greens_shift(2, 0.0);
  CHECK(eval_trace(hinge, 0.0, Side::minus) == 0.0);
  CHECK(eval_trace(hinge, 0.0, Side::plus) == 0.0);
}

TEST_CASE("generalized_trace") {
  PolySpline hinge = PolySpline::greens_shift(2, 0.0);
  CHECK(generalized_trace(hinge, 0.0, Side::plus, 1) == 1.0);
  CHECK(generalized_trace(hinge, 0.0, Side::minus, 1) == 0.0);

  PolySpline id = PolySpline::polynomial(2, {0.0, 1.0});
  CHECK(generalized_trace(id, 0.7, Side::plus, 1) == 1.0);
  CHECK(generalized_trace(id, -3.1, Side::minus, 1) == 1.0);

  CHECK_THROWS_AS(generalized_trace(hinge, 0.0, Side::plus, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(generalized_trace(hinge, 0.0, Side::plus, -1),
                  std::invalid_argument);
}

TEST_CASE("derivative_measure") {
  CHECK(derivative_measure(PolySpline::greens_shift(1, 0.0)) ==
        SignedMeasure::dirac(0.0));
  CHECK(derivative_measure(PolySpline::polynomial(1, {1.0})).is_zero());
  PolySpline f(1, {1.0}, {{1.0, 2.0}, {3.0, -1.0}});
  CHECK(derivative_measure(f) ==
        SignedMeasure::from_atoms({{1.0, 2.0}, {3.0, -1.0}}));
}

TEST_CASE("gbv_norm closed forms") {
  FundamentalSystem sys(1, Interval::from(-1.0));
  CHECK(gbv_norm(PolySpline::polynomial(1, {1.0}), sys) == 1.0);
  CHECK(gbv_norm(PolySpline::greens_shift(1, 0.0), sys) == 1.0);
  PolySpline f(1, {1.0}, {{0.0, 2.0}});
  CHECK(gbv_norm(f, sys) == 3.0);
  CHECK(gbv_norm(PolySpline::zero(1), sys) == 0.0);
}

TEST_CASE("spline canonical form") {
  PolySpline f(1, {0.0}, {{1.0, 1.0}, {0.0, 2.0}, {1.0, -1.0}});
  CHECK(f.knots().size() == 1);  // colliding pair at 1 cancels and is dropped
  CHECK(f.knots()[0].location == 0.0);
  CHECK(f.knot_weight_at(1.0) == 0.0);
  CHECK(f.knot_weight_at(0.0) == 2.0);
  CHECK_THROWS_AS(PolySpline(0, {}, {}), std::invalid_argument);
}

namespace {

PolySpline random_spline(std::mt19937_64& gen, int order) {
  std::uniform_real_distribution<double> c(-2.0, 2.0), loc(-4.0, 4.0);
  std::uniform_int_distribution<int> nk(0, 5);
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

TEST_CASE("trace jump equals knot weight for N=1, zero for N>=2") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> pt(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    PolySpline f1 = random_spline(gen, 1);
    for (const Knot& k : f1.knots())
      CHECK(eval_trace(f1, k.location, Side::plus) -
                eval_trace(f1, k.location, Side::minus) ==
            doctest::Approx(k.weight).epsilon(1e-12));
    PolySpline f2 = random_spline(gen, 2);
    for (int j = 0; j < 20; ++j) {
      double t = pt(gen);
      CHECK(eval_trace(f2, t, Side::plus) ==
            doctest::Approx(eval_trace(f2, t, Side::minus)).epsilon(1e-13));
    }
  }
}

TEST_CASE("N=1 trace is b0 plus cumulative of the derivative") {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> pt(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    PolySpline f = random_spline(gen, 1);
    SignedMeasure mu = derivative_measure(f);
    for (int j = 0; j < 5; ++j) {
      double t = pt(gen);
      for (Side s : {Side::minus, Side::plus})
        CHECK(eval_trace(f, t, s) ==
              doctest::Approx(f.null_coeffs()[0] + cumulative(mu, t, s))
                  .epsilon(1e-12));
    }
  }
}

TEST_CASE("gbv_norm is definite, subadditive, homogeneous") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> sc(-3.0, 3.0);
  FundamentalSystem sys(2, Interval::from(-5.0));
  for (int i = 0; i < 200; ++i) {
    PolySpline f = random_spline(gen, 2), g = random_spline(gen, 2);
    double nf = gbv_norm(f, sys), ng = gbv_norm(g, sys);
    CHECK((nf == 0.0) == f.is_zero());
    CHECK(gbv_norm(add(f, g), sys) <= nf + ng + 1e-10);
    double a = sc(gen);
    CHECK(gbv_norm(scale(f, a), sys) ==
          doctest::Approx(std::abs(a) * nf).epsilon(1e-12));
  }
}

TEST_CASE("generalized_trace with d=0 is eval_trace") {
  std::mt19937_64 gen(24);
  std::uniform_real_distribution<double> pt(-5.0, 5.0);
  for (int i = 0; i < 100; ++i)
    for (int N : {1, 2, 3}) {
      PolySpline f = random_spline(gen, N);
      double t = pt(gen);
      for (Side s : {Side::minus, Side::plus})
        CHECK(generalized_trace(f, t, s, 0) == eval_trace(f, t, s));
    }
}

TEST_CASE("spline add merges knots and drops zeros") {
  PolySpline f(1, {1.0}, {{0.0, 2.0}});
  PolySpline g(1, {-1.0}, {{0.0, -2.0}, {1.0, 1.0}});
  PolySpline sum = add(f, g);
  CHECK(sum.null_coeffs()[0] == 0.0);
  CHECK(sum.knots().size() == 1);
  CHECK(sum.knots()[0] == Knot{1.0, 1.0});
  CHECK(scale(f, 0.0).is_zero());
}
