#pragma once

#include <string>
#include <vector>

#include "datalimit/link_model.hpp"
#include "datalimit/planner.hpp"

namespace datalimit::cli {

struct CheckResult {
  std::string name;
  double max_rel_dev = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  bool passed() const { return max_rel_dev <= tolerance; }
};

/// Closed forms against the quadrature oracle, around the radio parameters
/// (B, sigma^2, d0, G) of `base`.
std::vector<CheckResult> run_validation(const LinkBudget& base, const EvalOptions& opts);

}  // namespace datalimit::cli
