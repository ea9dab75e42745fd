#include "lia2c/oracles/org_chain.hpp"

#include <cmath>
#include <stdexcept>

namespace lia2c::oracles {
namespace {

int obs_of(int level) { return level <= 1 ? 0 : (level <= 3 ? 1 : 2); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct RowStats {
  double up = 0.0;
  double down = 0.0;
  double ind = 0.0;    // expected individual reward
  double share = 0.0;  // expected (w_g #group + w_b #balance) / N
};

RowStats row_stats(const org::RewardParams& params, int n, const std::array<double, 3>& p) {
  RowStats r;
  for (int s = 0; s <= n; ++s) {
    for (int b = 0; s + b <= n; ++b) {
      const int g = n - s - b;
      const double prob = factorial(n) / (factorial(s) * factorial(b) * factorial(g)) *
                          std::pow(p[0], s) * std::pow(p[1], b) * std::pow(p[2], g);
      if (g > s) r.up += prob;
      if (s > g) r.down += prob;
    }
  }
  r.ind = p[0] * params.self_reward + p[1] * params.balance_reward + p[2] * params.group_reward;
  r.share = params.w_group * p[2] + params.w_balance * p[1];
  return r;
}

double chain_value(const org::RewardParams& params, int horizon,
                   const std::array<RowStats, 3>& rows) {
  std::array<double, 5> dist{0, 0, 1, 0, 0};
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    std::array<double, 5> next{};
    for (int l = 0; l < 5; ++l) {
      if (dist[l] == 0.0) continue;
      const RowStats& r = rows[obs_of(l)];
      total += dist[l] * (r.ind + params.level_multipliers[l] * r.share);
      next[std::min(l + 1, 4)] += dist[l] * r.up;
      next[std::max(l - 1, 0)] += dist[l] * r.down;
      next[l] += dist[l] * (1.0 - r.up - r.down);
    }
    dist = next;
  }
  return total;
}

}  // namespace

ObsPolicy constant_policy(double self, double balance, double group) {
  ObsPolicy p;
  for (auto& row : p) row = {self, balance, group};
  return p;
}

double expected_return(const org::RewardParams& params, int n_agents, int horizon,
                       const ObsPolicy& policy) {
  std::array<RowStats, 3> rows;
  for (int o = 0; o < 3; ++o) rows[o] = row_stats(params, n_agents, policy[o]);
  return chain_value(params, horizon, rows);
}

std::vector<std::array<double, 5>> level_marginals(int n_agents, int horizon,
                                                   const ObsPolicy& policy) {
  const org::RewardParams unused;
  std::array<RowStats, 3> rows;
  for (int o = 0; o < 3; ++o) rows[o] = row_stats(unused, n_agents, policy[o]);
  std::vector<std::array<double, 5>> out;
  std::array<double, 5> dist{0, 0, 1, 0, 0};
  out.push_back(dist);
  for (int t = 0; t < horizon; ++t) {
    std::array<double, 5> next{};
    for (int l = 0; l < 5; ++l) {
      const RowStats& r = rows[obs_of(l)];
      next[std::min(l + 1, 4)] += dist[l] * r.up;
      next[std::max(l - 1, 0)] += dist[l] * r.down;
      next[l] += dist[l] * (1.0 - r.up - r.down);
    }
    dist = next;
    out.push_back(dist);
  }
  return out;
}

SymmetricOptimum optimal_symmetric_policy(const org::RewardParams& params, int n_agents,
                                          int horizon, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  std::vector<std::array<double, 3>> grid;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; i + j <= resolution; ++j) {
      const double s = static_cast<double>(i) / resolution;
      const double b = static_cast<double>(j) / resolution;
      grid.push_back({s, b, std::max(0.0, 1.0 - s - b)});
    }
  }
  std::vector<RowStats> stats;
  stats.reserve(grid.size());
  for (const auto& p : grid) stats.push_back(row_stats(params, n_agents, p));

  SymmetricOptimum best;
  best.value = -1e300;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = 0; b < grid.size(); ++b) {
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const double v = chain_value(params, horizon, {stats[a], stats[b], stats[c]});
        if (v > best.value) {
          best.value = v;
          best.policy = {grid[a], grid[b], grid[c]};
        }
      }
    }
  }
  return best;
}

double constant_staffing_return(const org::RewardParams& params, int horizon, int target) {
  if (target < 1) throw std::invalid_argument("target staffing must be at least one");
  int level = 2;
  int employees = 1;
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const bool hiring = employees < target;
    const int live = employees + 1;
    const int group = employees + (hiring ? 0 : 1);
    const double ind = employees * params.group_reward;
    const double sigma =
        1.0 / (1.0 + std::exp(-std::pow(params.manager_beta, employees - 1) * ind));
    total += sigma + params.level_multipliers[level] * params.w_group * group / live -
             (hiring ? params.hire_cost : 0.0);
    if (group > 0) level = std::min(level + 1, 4);
    if (hiring) ++employees;
  }
  return total;
}

StaffingOptimum optimal_staffing(const org::RewardParams& params, int horizon, int max_employees) {
  StaffingOptimum out;
  double best = -1e300;
  for (int e = 1; e <= max_employees; ++e) {
    const double v = constant_staffing_return(params, horizon, e);
    out.returns.push_back(v);
    if (v > best) {
      best = v;
      out.employees = e;
    }
  }
  return out;
}

}  // namespace lia2c::oracles
