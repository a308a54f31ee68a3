#pragma once

#include <string>
#include <vector>

namespace conereg::verify {

struct CheckResult
{
  std::string suite;
  std::string name;
  bool pass = false;
  /// Worst observed deviation (or the checked quantity) and its bound.
  double value = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct Options
{
  /// Perturbs a reference constant so that checks fail; exercises the failure path.
  bool inject_fault = false;
};

/// special, exponent, barrier, solver.
const std::vector<std::string> &suite_names();

/// Runs one suite, or every suite for "all". Throws DomainError for an unknown name.
std::vector<CheckResult> run_suite(const std::string &suite, const Options &options = {});

} // namespace conereg::verify
