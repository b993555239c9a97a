#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "actlab/scenario.hpp"

namespace actlab {

struct CheckOutcome {
  double residual;
  nlohmann::json details;
};

struct CheckInfo {
  std::string id;
  std::string anchor;   // quote anchor shown by list-checks
  std::string summary;  // what is measured
  double default_tolerance;
  std::function<CheckOutcome(const Scenario&)> run;
};

const std::vector<CheckInfo>& check_catalogue();
const CheckInfo* find_check(std::string_view id);
std::vector<std::string> check_ids();

// Runs one check with the scenario's effective tolerance. Exceptions thrown
// by the check are reported as a failed result with an infinite residual.
CheckResult run_check(const CheckInfo& info, const Scenario& scenario);

}  // namespace actlab
