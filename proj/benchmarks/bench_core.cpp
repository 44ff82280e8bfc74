#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bvsamp/solver.hpp"
#include "bvsamp/system.hpp"

using namespace bvsamp;

static SignedMeasure make_measure(int n_atoms) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> loc(-5.0, 5.0), w(0.5, 2.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < n_atoms; ++i) atoms.push_back(Atom{loc(gen), w(gen)});
  return SignedMeasure::from_atoms(std::move(atoms));
}

static void RightInverse(benchmark::State& state) {
  FundamentalSystem sys(static_cast<int>(state.range(1)),
                        Interval::from(-6.0));
  SignedMeasure mu = make_measure(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    PolySpline g = right_inverse(mu, sys);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(RightInverse)->Args({8, 1})->Args({64, 2})->Args({256, 4});

static void TraceEval(benchmark::State& state) {
  FundamentalSystem sys(3, Interval::from(-6.0));
  PolySpline f = right_inverse(make_measure(static_cast<int>(state.range(0))),
                               sys);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_trace(f, t, Side::plus));
    t += 1e-3;
  }
}
BENCHMARK(TraceEval)->Arg(16)->Arg(128);

static void SolvePenalized(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  std::vector<Measurement> ms;
  std::vector<double> y;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-2.0, 2.0);
  for (int m = 0; m < M; ++m) {
    ms.push_back(Measurement::single(1.0, u(gen), Side::plus, 0, 1));
    y.push_back(v(gen));
  }
  Problem p{1, std::nullopt, ms, y, Loss::squared(), 0.1, std::nullopt};
  for (auto _ : state) {
    Solution s = solve(p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(SolvePenalized)->Arg(2)->Arg(6);

BENCHMARK_MAIN();
