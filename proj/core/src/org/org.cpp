#include "lia2c/org/org.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lia2c/error.hpp"

namespace lia2c::org {
namespace {

constexpr std::array<Action, 3> kClosedEmployee = {Action::kSelf, Action::kBalance,
                                                   Action::kGroup};
constexpr std::array<Action, 4> kOpenEmployee = {Action::kSelf, Action::kBalance, Action::kGroup,
                                                 Action::kResign};
constexpr std::array<Action, 5> kManager = {Action::kSelf, Action::kBalance, Action::kGroup,
                                            Action::kHire, Action::kFire};

bool legal_for(Role role, Action a) {
  switch (a) {
    case Action::kResign:
      return role == Role::kEmployee;
    case Action::kHire:
    case Action::kFire:
      return role == Role::kManager;
    default:
      return true;
  }
}

void check_roles(const OrgState& state, const JointAction& actions) {
  if (actions.size() != state.roster.size()) {
    throw DimensionError("expected " + std::to_string(state.roster.size()) + " actions, got " +
                         std::to_string(actions.size()));
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (!legal_for(state.roster[i].role, actions[i])) {
      throw std::invalid_argument("action " + std::string(action_name(actions[i])) +
                                  " is not available to agent " +
                                  std::to_string(state.roster[i].id));
    }
  }
}

}  // namespace

double RewardParams::individual(Action a) const {
  switch (a) {
    case Action::kSelf:
      return self_reward;
    case Action::kBalance:
      return balance_reward;
    case Action::kGroup:
      return group_reward;
    case Action::kResign:
      return resign_reward;
    case Action::kHire:
      return hire_reward;
    case Action::kFire:
      return fire_reward;
  }
  return 0.0;
}

void RewardParams::validate() const {
  if (hire_cost < 0.0) throw ConfigError("hire cost must be nonnegative");
  for (int l = 1; l < kLevelCount; ++l) {
    if (level_multipliers[l] < level_multipliers[l - 1]) {
      throw ConfigError("level multipliers must be nondecreasing");
    }
  }
  if (!(manager_beta > 0.0)) throw ConfigError("manager beta must be positive");
}

void OrgConfig::validate() const {
  rewards.validate();
  if (!open_mode && n_employees < 1) throw ConfigError("closed mode needs at least one employee");
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in [0, 1)");
  if (horizon < 1) throw ConfigError("horizon must be positive");
}

int OrgState::employee_count() const {
  return static_cast<int>(std::count_if(roster.begin(), roster.end(),
                                        [](const Member& m) { return m.role == Role::kEmployee; }));
}

int OrgState::index_of(int id) const {
  for (std::size_t i = 0; i < roster.size(); ++i) {
    if (roster[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::span<const Action> role_actions(Role role, bool open_mode) {
  if (role == Role::kManager) return kManager;
  if (open_mode) return kOpenEmployee;
  return kClosedEmployee;
}

std::size_t population_categories(bool open_mode) { return open_mode ? 4 : 3; }

int population_category(Action a) {
  switch (a) {
    case Action::kSelf:
      return 0;
    case Action::kBalance:
      return 1;
    case Action::kGroup:
      return 2;
    default:
      return 3;
  }
}

std::string_view level_name(Level l) {
  static constexpr std::array<std::string_view, kLevelCount> names = {"s_vl", "s_l", "s_m", "s_h",
                                                                      "s_vh"};
  return names[static_cast<std::size_t>(l)];
}

std::string_view action_name(Action a) {
  static constexpr std::array<std::string_view, 6> names = {"self",   "balance", "group",
                                                            "resign", "hire",    "fire"};
  return names[static_cast<std::size_t>(a)];
}

PublicObs observation_for(Level l) {
  switch (l) {
    case Level::kVeryLow:
    case Level::kLow:
      return PublicObs::kMeager;
    case Level::kMedium:
    case Level::kHigh:
      return PublicObs::kSeveral;
    case Level::kVeryHigh:
      return PublicObs::kMany;
  }
  return PublicObs::kSeveral;
}

ResetResult reset(const OrgConfig& config, std::mt19937_64& rng) {
  config.validate();
  ResetResult r;
  r.state.level = Level::kMedium;
  if (config.open_mode) {
    r.state.roster = {{0, Role::kManager}, {1, Role::kEmployee}};
    r.state.next_id = 2;
  } else {
    for (int i = 0; i < config.n_employees; ++i) r.state.roster.push_back({i, Role::kEmployee});
    r.state.next_id = config.n_employees;
  }
  for (std::size_t i = 0; i < r.state.roster.size(); ++i) {
    r.observations.push_back(public_obs(r.state, config.epsilon, rng));
  }
  return r;
}

OrgState transition(const OrgState& state, const JointAction& actions) {
  check_roles(state, actions);
  const auto selfish = std::count(actions.begin(), actions.end(), Action::kSelf);
  const auto group = std::count(actions.begin(), actions.end(), Action::kGroup);
  OrgState next = state;
  int level = static_cast<int>(state.level);
  if (group > selfish) level = std::min(level + 1, kLevelCount - 1);
  if (selfish > group) level = std::max(level - 1, 0);
  next.level = static_cast<Level>(level);
  return next;
}

PublicObs public_obs(const OrgState& state, double epsilon, std::mt19937_64& rng) {
  const PublicObs truth = observation_for(state.level);
  if (epsilon <= 0.0) return truth;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) >= epsilon) return truth;
  std::uniform_int_distribution<int> other(0, kPublicObsCount - 2);
  int o = other(rng);
  if (o >= static_cast<int>(truth)) ++o;
  return static_cast<PublicObs>(o);
}

pop::PrivateObservation private_obs(const OrgState& state, const JointAction& actions,
                                    int viewer, double delta, bool open_mode,
                                    std::mt19937_64& rng) {
  check_roles(state, actions);
  const int k = static_cast<int>(population_categories(open_mode));
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> other(0, k - 2);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (state.roster[i].id == viewer) continue;
    int c = population_category(actions[i]);
    if (c >= k) throw std::invalid_argument("roster action in closed mode");
    if (delta > 0.0 && u(rng) < delta) {
      int r = other(rng);
      if (r >= c) ++r;
      c = r;
    }
    ++counts[static_cast<std::size_t>(c)];
  }
  return pop::PrivateObservation{pop::Configuration(std::move(counts)), delta};
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> rewards(const RewardParams& params, const OrgState& state_before,
                            const JointAction& actions) {
  check_roles(state_before, actions);
  const double n_live = static_cast<double>(actions.size());
  const auto n_group = std::count(actions.begin(), actions.end(), Action::kGroup);
  const auto n_balance = std::count(actions.begin(), actions.end(), Action::kBalance);
  const double multiplier = params.level_multipliers[static_cast<std::size_t>(state_before.level)];
  const double group_component =
      multiplier * (params.w_group * n_group + params.w_balance * n_balance) / n_live;

  double employee_individual = 0.0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (state_before.roster[i].role == Role::kEmployee) {
      employee_individual += params.individual(actions[i]);
    }
  }
  const int employees = state_before.employee_count();
  const double discount = std::pow(params.manager_beta, std::max(employees - 1, 0));

  std::vector<double> out(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (state_before.roster[i].role == Role::kEmployee) {
      out[i] = params.individual(actions[i]) + group_component;
    } else {
      const double hired = actions[i] == Action::kHire ? 1.0 : 0.0;
      out[i] = logistic(discount * employee_individual) + group_component -
               params.hire_cost * hired;
    }
  }
  return out;
}

OrgState apply_openness(const OrgState& state, const JointAction& actions,
                        const std::function<void(int)>& on_hire) {
  check_roles(state, actions);
  OrgState next = state;
  std::vector<int> resigned;
  bool fire = false;
  bool hire = false;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == Action::kResign) resigned.push_back(state.roster[i].id);
    if (actions[i] == Action::kFire) fire = true;
    if (actions[i] == Action::kHire) hire = true;
  }
  auto remove = [&next](int id) {
    std::erase_if(next.roster, [id](const Member& m) { return m.id == id; });
    std::erase(next.hire_stack, id);
  };
  for (int id : resigned) remove(id);
  if (fire && !next.hire_stack.empty()) remove(next.hire_stack.back());
  if (hire) {
    const int id = next.next_id++;
    next.roster.push_back({id, Role::kEmployee});
    next.hire_stack.push_back(id);
    if (on_hire) on_hire(id);
  }
  return next;
}

void check_joint_action(const OrgState& state, const JointAction& actions, bool open_mode) {
  check_roles(state, actions);
  if (!open_mode) {
    for (Action a : actions) {
      if (a == Action::kResign || a == Action::kHire || a == Action::kFire) {
        throw std::invalid_argument("roster actions are only available in open mode");
      }
    }
  }
}

}  // namespace lia2c::org
