#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "lia2c/population/types.hpp"

namespace lia2c::org {

/// Financial health of the organization, lowest first.
enum class Level : int { kVeryLow = 0, kLow, kMedium, kHigh, kVeryHigh };
inline constexpr int kLevelCount = 5;

/// Public order-volume signal.
enum class PublicObs : int { kMeager = 0, kSeveral, kMany };
inline constexpr int kPublicObsCount = 3;

enum class Role { kEmployee, kManager };

enum class Action : int { kSelf = 0, kBalance, kGroup, kResign, kHire, kFire };

/// Individual reward per action plus the group and manager terms.
struct RewardParams {
  double self_reward = 2.0;
  double balance_reward = 1.0;
  double group_reward = 0.0;
  double resign_reward = 0.0;
  double hire_reward = 0.0;
  double fire_reward = 0.0;
  double w_group = 1.0;
  double w_balance = 0.5;
  std::array<double, kLevelCount> level_multipliers = {0.0, 0.5, 1.0, 1.5, 2.0};
  double hire_cost = 1.0;
  double manager_beta = 0.9;

  double individual(Action a) const;
  void validate() const;
};

struct OrgConfig {
  int n_employees = 5;  // closed mode roster size
  bool open_mode = false;
  double delta = 0.1;    // private-observation misreport rate
  double epsilon = 0.0;  // public-observation corruption rate
  int horizon = 50;
  RewardParams rewards;

  void validate() const;
};

struct Member {
  int id = 0;
  Role role = Role::kEmployee;
};

struct OrgState {
  Level level = Level::kMedium;
  std::vector<Member> roster;
  std::vector<int> hire_stack;  // hired employee ids, most recent last
  int next_id = 0;

  int employee_count() const;
  int index_of(int id) const;  // -1 if absent
};

/// One action per roster entry, in roster order.
using JointAction = std::vector<Action>;

/// Actions available to a role; employees may resign only in open mode.
std::span<const Action> role_actions(Role role, bool open_mode);

/// Population model alphabet: self, balance, group and, in open mode, one
/// shared category for the roster actions (resign, hire, fire).
std::size_t population_categories(bool open_mode);
int population_category(Action a);

std::string_view level_name(Level l);
std::string_view action_name(Action a);
PublicObs observation_for(Level l);

struct ResetResult {
  OrgState state;
  std::vector<PublicObs> observations;  // per roster entry
};

/// Starts at the medium level. Closed mode seeds `n_employees` employees;
/// open mode one manager and one employee.
ResetResult reset(const OrgConfig& config, std::mt19937_64& rng);

/// Moves the level one step toward more group or more self choices (ties
/// keep it) and applies no roster change.
OrgState transition(const OrgState& state, const JointAction& actions);

/// Deterministic level mapping, replaced by a uniformly random other
/// category with probability epsilon.
PublicObs public_obs(const OrgState& state, double epsilon, std::mt19937_64& rng);

/// Counts of the other roster members' actions as seen by `viewer`; each is
/// reported truthfully with probability 1 - delta, else as one of the other
/// categories uniformly.
pop::PrivateObservation private_obs(const OrgState& state, const JointAction& actions,
                                    int viewer, double delta, bool open_mode,
                                    std::mt19937_64& rng);

/// Per-roster-entry rewards for one tick, using the level before the move.
std::vector<double> rewards(const RewardParams& params, const OrgState& state_before,
                            const JointAction& actions);

/// Resignations, then a fire (pops the hire stack, no-op when empty), then a
/// hire. `on_hire` receives each new employee id.
OrgState apply_openness(const OrgState& state, const JointAction& actions,
                        const std::function<void(int)>& on_hire = {});

/// Validates one action per roster entry and role-legal choices.
void check_joint_action(const OrgState& state, const JointAction& actions, bool open_mode);

double logistic(double x);

}  // namespace lia2c::org
