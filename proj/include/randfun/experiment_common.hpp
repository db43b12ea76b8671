#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "randfun/error.hpp"
#include "randfun/growth.hpp"
#include "randfun/report.hpp"

namespace randfun {

struct RunOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  double tail_tol = 1e-12;
  double eta = kDefaultEta;
};

namespace detail {

inline ojson options_json(const RunOptions& o) {
  return {{"seed", o.seed}, {"tail_tol", o.tail_tol}, {"eta", o.eta}};
}

// Numerical trouble on a single Monte Carlo trial is recorded instead of
// aborting the run; anything else propagates.
inline bool recoverable(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::RoucheMarginUnverifiable:
    case ErrorCode::BoundaryRootUnresolved:
      return true;
    default:
      return false;
  }
}

inline void apply_failure_budget(ExperimentReport& rep, std::int64_t failures, std::int64_t trials) {
  rep.summary["failed_trials"] = failures;
  if (failures == 0) return;
  rep.notes.push_back(std::to_string(failures) + " of " + std::to_string(trials) +
                      " trials hit a numerical failure and were skipped");
  if (static_cast<double>(failures) >= 0.01 * static_cast<double>(trials)) {
    rep.passed = false;
    rep.notes.push_back("numerical failures reached 1% of trials");
  }
}

inline std::vector<double> sorted_grid(std::vector<double> grid) {
  require(!grid.empty(), ErrorCode::InvalidArgument, "radius grid is empty");
  for (double r : grid) require(r > 0 && std::isfinite(r), ErrorCode::InvalidArgument, "radii must be positive");
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace detail
}  // namespace randfun
