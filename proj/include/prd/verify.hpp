// Built-in verification suite: quantitative checks of every conservation,
// monotonicity, decay, band, continuity, and convergence guarantee the
// solver is designed around, plus randomized differential tests of the
// hysteresis machinery. The `fast` level runs the randomized checks and a
// short conservation run; `full` adds the long-horizon runs.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace prd {

enum class VerifyLevel { fast, full };

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed{false};
  bool warn_only{false};  // reported but never fails the suite
  std::string detail;
};

std::vector<CriterionResult> run_verification(VerifyLevel level,
                                              std::uint64_t seed);

/// One line per criterion: [PASS]/[FAIL]/[WARN] id name: detail.
void print_verification(const std::vector<CriterionResult>& results,
                        std::ostream& out);

/// 0 iff every non-advisory criterion passed.
int verification_exit_code(const std::vector<CriterionResult>& results);

}  // namespace prd
