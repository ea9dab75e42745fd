#pragma once

// Brute-force counterparts of the population-model routines: every joint
// action (and every joint model assignment) is visited explicitly.

#include <functional>
#include <map>
#include <vector>

namespace lia2c::oracles {

using Counts = std::vector<int>;

/// Distribution of the action-count vector by summing over all |A|^N joint
/// actions.
std::map<Counts, double> joint_config_distribution(const std::vector<std::vector<double>>& per_agent);

/// Count-corruption likelihood by enumerating every agent's reported action.
double joint_misreport_likelihood(const Counts& true_counts, const Counts& observed, double delta);

/// Candidate models for one agent: policy[m][a] at the current public
/// observation, prior[m].
struct AgentModels {
  std::vector<std::vector<double>> policy;
  std::vector<double> prior;
};

using CountLikelihood = std::function<double(const Counts& true_counts)>;

/// Posterior over each agent's models given the observation likelihood as a
/// function of the true counts, by enumerating all joint models and actions.
std::vector<std::vector<double>> joint_model_posterior(const std::vector<AgentModels>& agents,
                                                       std::size_t action_count,
                                                       const CountLikelihood& likelihood);

}  // namespace lia2c::oracles
