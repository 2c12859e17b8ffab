#pragma once

#include "loopframe/config.hpp"

#include <string>
#include <vector>

namespace loopframe {

struct CheckRecord {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  /// The measurement must exceed the tolerance instead (negative controls).
  bool lower_bound = false;
  bool pass = false;
  std::string note;
};

/// Runs the invariant checks of the selected suites with the configured
/// tolerances and seed. Exceptions inside a check become failed records.
std::vector<CheckRecord> run_verification(const RunConfig& c);

bool all_pass(const std::vector<CheckRecord>& r);
/// {"pass": bool, "checks": [...]} with measurements at fixed precision.
Json verification_report(const std::vector<CheckRecord>& r);

}  // namespace loopframe
