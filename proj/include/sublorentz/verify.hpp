// Property suites behind `sublorentz verify`: each check runs the relevant
// construction at a pinned tolerance and reports the measured value next to
// the threshold it was held to.
#pragma once

#include <string>
#include <vector>

namespace sublorentz {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", "<=", ">=", "in" ... how measured meets threshold
  int criterion = 0;     // acceptance criterion this check backs (0 = extra)
};

std::vector<CheckResult> verify_conservation();
std::vector<CheckResult> verify_oracle();
std::vector<CheckResult> verify_gauge();
std::vector<CheckResult> verify_abnormal();
std::vector<CheckResult> verify_asymptotics();
std::vector<CheckResult> verify_nonholonomy();
std::vector<CheckResult> verify_figures();
std::vector<CheckResult> verify_hygiene();

const std::vector<std::string>& verify_suite_names();
// Dispatch by suite name ("all" runs everything). Throws SpecError on an
// unknown name.
std::vector<CheckResult> run_verify_suite(const std::string& name);

}  // namespace sublorentz
