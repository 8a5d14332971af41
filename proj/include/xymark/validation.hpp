// validation.hpp — Acceptance checks shared by the acceptance binary and the CLI validate command

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace xymark {

struct CheckResult {
    int id{0};
    std::string name;
    bool pass{false};
    std::string detail;                                  // one-line summary of the measured values
    std::vector<std::pair<std::string, double>> metrics;  // measured quantities, in insertion order
    double seconds{0.0};
};

// Ids 1..10. Exceptions inside a check become a failed result with the message as detail.
CheckResult run_check(int id);
std::vector<CheckResult> run_checks(const std::vector<int>& ids);
std::vector<int> all_check_ids();

}  // namespace xymark
