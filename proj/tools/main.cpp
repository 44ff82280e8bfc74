// bvsamp: trace sampling and TV-regularized inverse problems over
// bounded-variation splines.
//
// Subcommands: solve, eval, check, demo-weakstar, extreme-points.
// Exit codes: 0 success, 1 I/O or schema error, 2 infeasible/ill-posed or
// scale guard, 3 invariant failure (check).

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bvsamp/selfcheck.hpp"
#include "bvsamp/serialize.hpp"
#include "bvsamp/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvariant = 3;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<double> parse_lambda_grid(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::runtime_error("empty lambda grid");
  return out;
}

std::string trace_table_csv(const bvsamp::Problem& p,
                            const bvsamp::PolySpline& f) {
  using namespace bvsamp;
  double lo = p.min_abscissa() - 1.0;
  double hi = p.max_abscissa() + 1.0;
  std::vector<double> ts;
  for (int i = 0; i < 1000; ++i)
    ts.push_back(lo + (hi - lo) * static_cast<double>(i) / 999.0);
  for (const Knot& k : f.knots()) ts.push_back(k.location);
  for (const Measurement& m : p.measurements)
    for (const Measurement::Term& t : m.terms()) ts.push_back(t.functional.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  int d = f.order() - 1;
  std::string csv = "t,f_minus,f_plus,dtop_minus,dtop_plus\n";
  for (double t : ts) {
    csv += fmt17(t) + "," + fmt17(eval_trace(f, t, Side::minus)) + "," +
           fmt17(eval_trace(f, t, Side::plus)) + "," +
           fmt17(generalized_trace(f, t, Side::minus, d)) + "," +
           fmt17(generalized_trace(f, t, Side::plus, d)) + "\n";
  }
  return csv;
}

int cmd_solve(const std::string& problem_path, double oracle_step, double tol,
              int max_iter, const std::string& out_path,
              const std::string& csv_path, const std::string& lambda_grid) {
  using namespace bvsamp;
  Problem p;
  try {
    p = problem_from_json(load_json(problem_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    auto run = [&](const Problem& q) {
      return oracle_step > 0.0 ? oracle_solve(q, oracle_step)
                               : solve(q, opts);
    };

    nlohmann::json doc;
    std::optional<Solution> first;
    if (lambda_grid.empty()) {
      first = run(p);
      doc = to_json(*first);
    } else {
      doc = nlohmann::json::array();
      for (double lam : parse_lambda_grid(lambda_grid)) {
        Problem q = p;
        q.lambda = lam;
        Solution s = run(q);
        nlohmann::json sj = to_json(s);
        sj["lambda"] = lam;
        doc.push_back(sj);
        if (!first) first = std::move(s);
      }
    }

    std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
      std::cout << text;
    else
      write_text(out_path, text);
    if (!csv_path.empty() && first)
      write_text(csv_path, trace_table_csv(p, first->spline));
    return kExitOk;
  } catch (const InfeasibleProblem& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ScaleGuardExceeded& e) {
    std::cerr << "scale guard: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ill-posed: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_eval(const std::string& spline_path,
             const std::vector<std::string>& queries) {
  using namespace bvsamp;
  try {
    PolySpline f = spline_from_json(load_json(spline_path));
    for (const std::string& q : queries) {
      std::stringstream ss(q);
      std::string t_s, side_s, d_s;
      if (!std::getline(ss, t_s, ':') || !std::getline(ss, side_s, ':') ||
          !std::getline(ss, d_s))
        throw std::invalid_argument("query must be t:side:d, got " + q);
      double t = std::stod(t_s);
      int d = std::stoi(d_s);
      Side side;
      if (side_s == "plus")
        side = Side::plus;
      else if (side_s == "minus")
        side = Side::minus;
      else
        throw std::invalid_argument("side must be plus|minus, got " + side_s);
      double v = generalized_trace(f, t, side, d);
      std::cout << fmt17(t) << " " << side_s << " " << d << " " << fmt17(v)
                << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_check(std::uint64_t seed, int cases) {
  using namespace bvsamp;
  if (cases == 0)
    std::cerr << "warning: --cases 0, all invariant suites pass vacuously\n";
  std::vector<CheckResult> results = run_selfcheck(seed, cases);
  bool all_ok = true;
  std::size_t width = 0;
  for (const CheckResult& r : results) width = std::max(width, r.name.size());
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name;
    if (!r.passed) {
      std::cout << std::string(width - r.name.size() + 2, ' ') << r.detail;
      all_ok = false;
    }
    std::cout << "\n";
  }
  return all_ok ? kExitOk : kExitInvariant;
}

int cmd_demo_weakstar(int n_max, const std::string& out_path) {
  using namespace bvsamp;
  try {
    FundamentalSystem sys(1, Interval::from(-2.0));
    PiecewiseLinearTestFunction g = PiecewiseLinearTestFunction::hat(0.0, 1.0);
    std::string csv = "n,pairing_hat,trace_plus_at_0,jet0\n";
    for (int n = 1; n <= n_max; ++n) {
      WeakstarSample w = weakstar_counterexample(n, g, sys);
      csv += std::to_string(n) + "," + fmt17(w.pairing) + "," +
             fmt17(w.trace) + "," + fmt17(w.jet[0]) + "\n";
    }
    if (out_path.empty())
      std::cout << csv;
    else
      write_text(out_path, csv);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_extreme(const std::string& problem_path, int max_support,
                const std::string& out_path) {
  using namespace bvsamp;
  Problem p;
  try {
    p = problem_from_json(load_json(problem_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    ExtremeOptions opts;
    opts.max_support = max_support;
    nlohmann::json arr = nlohmann::json::array();
    for (const Solution& s : enumerate_extreme_points(p, opts))
      arr.push_back(to_json(s));
    std::string text = arr.dump(2) + "\n";
    if (out_path.empty())
      std::cout << text;
    else
      write_text(out_path, text);
    return kExitOk;
  } catch (const ScaleGuardExceeded& e) {
    std::cerr << "scale guard: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleProblem& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ill-posed: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling and TV-regularized inversion over BV splines"};
  app.require_subcommand(1);

  std::string problem_path, out_path, csv_path, lambda_grid;
  double oracle_step = 0.0, tol = 1e-12;
  int max_iter = 500000;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem document");
  solve_cmd->add_option("problem", problem_path)->required();
  solve_cmd->add_option("--oracle-step", oracle_step,
                        "Use the grid oracle with this pitch");
  solve_cmd->add_option("--tol", tol);
  solve_cmd->add_option("--max-iter", max_iter);
  solve_cmd->add_option("--out", out_path);
  solve_cmd->add_option("--csv", csv_path, "Write a trace-sample table");
  solve_cmd->add_option("--lambda-grid", lambda_grid,
                        "Comma-separated lambda values");

  std::string spline_path;
  std::vector<std::string> queries;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate spline traces");
  eval_cmd->add_option("spline", spline_path)->required();
  eval_cmd->add_option("--at", queries, "Query t:side:d")->required();

  std::uint64_t seed = 0;
  int cases = 100;
  auto* check_cmd = app.add_subcommand("check", "Run the invariant suites");
  check_cmd->add_option("--seed", seed);
  check_cmd->add_option("--cases", cases);

  int n_max = 10;
  std::string demo_out;
  auto* demo_cmd =
      app.add_subcommand("demo-weakstar", "Weak*-discontinuity table");
  demo_cmd->add_option("--n-max", n_max);
  demo_cmd->add_option("--out", demo_out);

  std::string ep_path, ep_out;
  int max_support = -1;
  auto* ep_cmd =
      app.add_subcommand("extreme-points", "Enumerate extreme points");
  ep_cmd->add_option("problem", ep_path)->required();
  ep_cmd->add_option("--max-support", max_support);
  ep_cmd->add_option("--out", ep_out);

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed())
    return cmd_solve(problem_path, oracle_step, tol, max_iter, out_path,
                     csv_path, lambda_grid);
  if (eval_cmd->parsed()) return cmd_eval(spline_path, queries);
  if (check_cmd->parsed()) {
    if (cases < 0) {
      std::cerr << "error: --cases must be >= 0\n";
      return kExitIo;
    }
    return cmd_check(seed, cases);
  }
  if (demo_cmd->parsed()) {
    if (n_max < 1) {
      std::cerr << "error: --n-max must be >= 1\n";
      return kExitIo;
    }
    return cmd_demo_weakstar(n_max, demo_out);
  }
  if (ep_cmd->parsed()) return cmd_extreme(ep_path, max_support, ep_out);
  return kExitIo;
}
