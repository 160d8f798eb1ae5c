#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace twave::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  nlohmann::json data;  // deterministic measurements backing the verdict
  double seconds = 0.0;
  double budget = 0.0;  // runtime budget in seconds (0: none)
};

struct Options {
  std::vector<int> criteria;           // empty: all
  std::optional<double> noise_tol;     // overrides FD and Cauchy self-consistency tolerances
  std::size_t jobs = 1;
};

inline constexpr int kCriteria = 10;

/// Accepts a comma-separated list of criterion numbers and/or module names
/// (models, profile, functionals, evans, oracles, cli).
std::vector<int> parse_filter(const std::string& filter);

CriterionResult run_criterion(int id, const Options& options);

/// Runs the selected criteria, printing one line per criterion to `log` as each completes.
std::vector<CriterionResult> run_all(const Options& options, std::ostream* log = nullptr);

std::string format_line(const CriterionResult& r);

/// Report of the results without wall-clock fields, so repeated runs serialise identically.
nlohmann::json report(const std::vector<CriterionResult>& results);

}  // namespace twave::acceptance
