#pragma once

#include <optional>
#include <string>
#include <vector>

namespace crtool {

struct CriterionResult {
  std::string suite;   // short name usable with `verify --suite`
  std::string title;
  bool pass = false;
  std::string detail;  // measured values
};

/// Names of the verification suites, in execution order.
const std::vector<std::string>& verification_suites();

/// Run the verification battery. `suites` empty or containing "all" runs
/// everything; unknown names throw std::invalid_argument. `tol`, when set,
/// overrides the headline tolerance of the selected suites (used by the CLI's
/// --tol); every other threshold stays pinned.
std::vector<CriterionResult> run_verification(
    const std::vector<std::string>& suites = {},
    std::optional<double> tol = std::nullopt, int threads = 0);

}  // namespace crtool
