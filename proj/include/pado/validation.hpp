#pragma once

// Fuzzed oracle comparisons shared by the CLI and the test suites.

#include <string>
#include <vector>

#include <json.hpp>

#include "pado/oracle.hpp"

namespace pado {

struct SuiteReport {
  std::string name;
  int instances = 0;
  int failures = 0;
  double worst = 0.0;      // largest normalized gap seen
  double tolerance = 0.0;
  double extra = 0.0;      // suite-specific figure (e.g. termination rate)
  std::vector<std::string> notes;

  bool passed() const { return failures == 0; }
  nlohmann::json to_json() const;
};

/// Closed-form split and frequency search vs. brute_force_p2.
SuiteReport validate_p2(const SimParams& base, int n, std::uint64_t seed);

/// Grid purchase vs. the exact argmin of the linear objective over the
/// feasible purchase interval.
SuiteReport validate_grid_purchase(const SimParams& base, int n, std::uint64_t seed);

/// solve_offer vs. brute_force_server on 1-2 vehicle instances. `extra` is the
/// fraction of instances that terminated by tolerance.
SuiteReport validate_server(const SimParams& base, int n, std::uint64_t seed,
                            double tolerance = 1e-3, double min_termination = 0.95);

/// Battery confinement over a full simulation of `base`.
SuiteReport validate_battery(const SimParams& base);

/// Random bid for fuzzing: random queues, task and prior price.
VehicleBid random_bid(Rng& rng, int vehicle, const SimParams& p);

}  // namespace pado
