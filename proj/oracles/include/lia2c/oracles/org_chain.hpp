#pragma once

// Exact expectations for the Org environment, computed by propagating the
// level distribution rather than by simulation. Only the reward table is
// shared with the library; the dynamics are re-derived here.

#include <array>
#include <vector>

#include "lia2c/org/org.hpp"

namespace lia2c::oracles {

/// Per public observation (meager, several, many): probabilities of
/// (self, balance, group).
using ObsPolicy = std::array<std::array<double, 3>, 3>;

ObsPolicy constant_policy(double self, double balance, double group);

/// Expected per-agent episode return when all `n_agents` employees follow
/// `policy` independently, starting at the medium level, without public
/// observation noise.
double expected_return(const org::RewardParams& params, int n_agents, int horizon,
                       const ObsPolicy& policy);

/// Level distribution after each tick (entry 0 is the start).
std::vector<std::array<double, 5>> level_marginals(int n_agents, int horizon,
                                                   const ObsPolicy& policy);

struct SymmetricOptimum {
  double value = 0.0;
  ObsPolicy policy{};
};

/// Grid search over the three simplices with step 1/resolution.
SymmetricOptimum optimal_symmetric_policy(const org::RewardParams& params, int n_agents,
                                          int horizon, int resolution = 10);

/// Manager return when it hires on each of the first target-1 ticks, then
/// plays group, while every employee plays group. Starts with one employee.
double constant_staffing_return(const org::RewardParams& params, int horizon, int target);

struct StaffingOptimum {
  int employees = 1;
  std::vector<double> returns;  // index e-1 holds the return for target e
};

StaffingOptimum optimal_staffing(const org::RewardParams& params, int horizon, int max_employees);

}  // namespace lia2c::oracles
