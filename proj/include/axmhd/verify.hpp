// Named verification suites at desk-scale configurations. Each check prints
// a margin and a PASS/FAIL flag; a suite passes iff all its checks do.
#pragma once

#include "axmhd/config.hpp"

#include <string>
#include <vector>

namespace axmhd {

struct CheckLine {
  std::string text;
  bool pass = true;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::vector<CheckLine> checks;

  void add(bool ok, const std::string& text) {
    checks.push_back({text, ok});
    pass = pass && ok;
  }
};

std::vector<std::string> suite_names();

// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name);

// The desk-scale reference configuration used by the suites (n x n grid).
Config standard_config(int n);

// Restriction by 2x2 cell averaging (fine -> coarse), used by the
// self-refinement studies.
ScalarField restrict_half(const ScalarField& fine);

} // namespace axmhd
