// The acceptance battery: ten self-contained checks covering the whole
// pipeline, from the Cramer closed form through the torus flow laboratory.
// Each criterion reports one pass/fail verdict with a short detail line;
// the test driver and the CLI selftest both run exactly this battery.

#ifndef NOV_ACCEPTANCE_HPP
#define NOV_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace nov {

struct CriterionResult {
    int number = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

/// Run all ten criteria.  `inject_fault` corrupts one coefficient inside the
/// two-route comparison (criterion 6), which must flip that verdict to fail;
/// it exists to prove the battery can detect a broken pipeline.
std::vector<CriterionResult> run_acceptance(bool inject_fault = false);

/// Criterion 6 alone (the two-route flow comparison); lets the fault
/// injection drill run without repeating the whole battery.
CriterionResult run_two_route_criterion(bool inject_fault);

}  // namespace nov

#endif
