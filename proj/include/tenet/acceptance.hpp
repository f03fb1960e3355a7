#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tenet {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Thirteen checks pinning the estimator, the bounds, and the harness against
// independent oracles and known closed forms; tolerances live here. The
// callback fires as each criterion finishes.
std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace tenet
