#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hessquot/config.hpp"

namespace hessquot {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst residual / slack seen
};

/// Oracle and lemma battery behind the `check` command: symmetric-function
/// calculus vs brute force, operator derivative and concavity checks,
/// hyperbolic structure-equation checks, and the distance-bound checks on
/// the configured domain. Deterministic for a fixed seed.
std::vector<CheckResult> run_check_suite(const RunConfig& config,
                                         std::uint64_t seed);

}  // namespace hessquot
