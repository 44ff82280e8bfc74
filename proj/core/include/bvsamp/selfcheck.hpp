#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bvsamp {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;  ///< empty on pass; minimized failing case otherwise
};

/// Runs the randomized invariant suites of every module. `cases` scales the
/// number of random instances per invariant; cases = 0 is a vacuous pass.
std::vector<CheckResult> run_selfcheck(std::uint64_t seed, int cases);

}  // namespace bvsamp
