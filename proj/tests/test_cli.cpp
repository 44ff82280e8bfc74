#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(BVSAMP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  int rc = pclose(pipe);
  return {WEXITSTATUS(rc), out};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

const char* kTwoPointProblem = R"({
  "order": 1,
  "measurements": [
    {"terms": [{"c": 1.0, "t": 0.0, "side": "plus", "d": 0}]},
    {"terms": [{"c": 1.0, "t": 1.0, "side": "plus", "d": 0}]}
  ],
  "y": [0.0, 2.0],
  "loss": {"kind": "squared"},
  "lambda": 0.1
})";

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("solve exits 0 and reports the closed-form cost") {
  fs::path p = write_temp("cli_two_point.json", kTwoPointProblem);
  RunResult r = run("solve " + p.string());
  CHECK(r.status == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["cost"].get<double>() - 0.195) <= 1e-9);
}

TEST_CASE("solve exit codes") {
  fs::path bad = write_temp("cli_bad.json", "{ not json");
  CHECK(run("solve " + bad.string()).status == 1);

  fs::path infeasible = write_temp("cli_infeasible.json", R"({
    "order": 1,
    "measurements": [
      {"terms": [{"c": 1.0, "t": 0.0, "side": "plus", "d": 0}]},
      {"terms": [{"c": 1.0, "t": 0.0, "side": "plus", "d": 0}]}
    ],
    "y": [0.0, 1.0],
    "loss": {"kind": "interpolation"}
  })");
  CHECK(run("solve " + infeasible.string()).status == 2);

  CHECK(run("solve /nonexistent/problem.json").status == 1);
}

TEST_CASE("solve writes byte-identical documents on repeated runs") {
  fs::path p = write_temp("cli_det.json", kTwoPointProblem);
  fs::path o1 = fs::temp_directory_path() / "cli_det_1.json";
  fs::path o2 = fs::temp_directory_path() / "cli_det_2.json";
  CHECK(run("solve " + p.string() + " --out " + o1.string()).status == 0);
  CHECK(run("solve " + p.string() + " --out " + o2.string()).status == 0);
  std::ifstream a(o1, std::ios::binary), b(o2, std::ios::binary);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());
}

TEST_CASE("csv trace table shows the jump at the knot") {
  fs::path p = write_temp("cli_csv.json", kTwoPointProblem);
  fs::path csv = fs::temp_directory_path() / "cli_csv_out.csv";
  fs::path out = fs::temp_directory_path() / "cli_csv_sol.json";
  REQUIRE(run("solve " + p.string() + " --out " + out.string() + " --csv " +
              csv.string())
              .status == 0);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,f_minus,f_plus,dtop_minus,dtop_plus");
  bool saw_jump = false;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    REQUIRE(row.size() == 5);
    double jump = row[2] - row[1];
    if (row[0] == 1.0) {
      CHECK(std::abs(jump - 1.9) <= 1e-9);
      saw_jump = true;
    } else {
      CHECK(std::abs(jump) <= 1e-12);
    }
  }
  CHECK(saw_jump);
}

TEST_CASE("eval prints side traces") {
  fs::path u = write_temp("cli_u.json",
                          R"({"order": 1, "null_coeffs": [0.0],
                              "knots": [[0.0, 1.0]]})");
  RunResult r = run("eval " + u.string() + " --at 0:plus:0 --at 0:minus:0");
  CHECK(r.status == 0);
  std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "0 plus 0 1");
  CHECK(lines[1] == "0 minus 0 0");

  fs::path hinge = write_temp("cli_hinge.json",
                              R"({"order": 2, "null_coeffs": [0.0, 0.0],
                                  "knots": [[0.0, 1.0]]})");
  RunResult h = run("eval " + hinge.string() + " --at 0:plus:1");
  CHECK(h.status == 0);
  CHECK(split_lines(h.out)[0] == "0 plus 1 1");

  CHECK(run("eval " + u.string() + " --at 0:plus:3").status == 1);
  CHECK(run("eval " + u.string() + " --at nonsense").status == 1);
}

TEST_CASE("check command") {
  CHECK(run("check --seed 1 --cases 5").status == 0);
  CHECK(run("check --cases 0").status == 0);
}

TEST_CASE("demo-weakstar emits the 1/n table") {
  RunResult r = run("demo-weakstar --n-max 3");
  CHECK(r.status == 0);
  std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "n,pairing_hat,trace_plus_at_0,jet0");
  CHECK(lines[1] == "1,1,1,0");
  CHECK(lines[2] == "2,0.5,1,0");
  CHECK(lines[3].substr(0, 2) == "3,");
  {
    std::stringstream ss(lines[3]);
    std::string tok;
    std::getline(ss, tok, ',');
    std::getline(ss, tok, ',');
    CHECK(std::abs(std::stod(tok) - 1.0 / 3.0) <= 1e-16);
  }
  CHECK(run("demo-weakstar --n-max 0").status == 1);
}

TEST_CASE("extreme-points command") {
  fs::path p = write_temp("cli_ep.json", R"({
    "order": 1,
    "measurements": [
      {"terms": [{"c": 1.0, "t": 0.0, "side": "plus", "d": 0}]},
      {"terms": [{"c": 1.0, "t": 1.0, "side": "plus", "d": 0}]}
    ],
    "y": [0.0, 1.0],
    "loss": {"kind": "interpolation"}
  })");
  RunResult r = run("extreme-points " + p.string());
  CHECK(r.status == 0);
  nlohmann::json arr = nlohmann::json::parse(r.out);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 1);
  CHECK(arr[0]["knot_count"].get<int>() == 1);

  fs::path big = write_temp("cli_ep_big.json", R"({
    "order": 1,
    "measurements": [
      {"terms": [{"c": 1.0, "t": 0.0, "side": "plus", "d": 0}]},
      {"terms": [{"c": 1.0, "t": 1.0, "side": "plus", "d": 0}]},
      {"terms": [{"c": 1.0, "t": 2.0, "side": "plus", "d": 0}]},
      {"terms": [{"c": 1.0, "t": 3.0, "side": "plus", "d": 0}]},
      {"terms": [{"c": 1.0, "t": 4.0, "side": "plus", "d": 0}]}
    ],
    "y": [0.0, 0.0, 0.0, 0.0, 0.0],
    "loss": {"kind": "interpolation"}
  })");
  CHECK(run("extreme-points " + big.string()).status == 2);
}
