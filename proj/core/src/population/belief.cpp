#include "lia2c/population/belief.hpp"

#include <cmath>
#include <string>

#include "lia2c/error.hpp"

namespace lia2c::pop {

double misreport_likelihood(const Configuration& true_counts, const Configuration& observed,
                            double delta) {
  const std::size_t k = true_counts.action_count();
  if (observed.action_count() != k) throw DimensionError("misreport_likelihood: dimensions differ");
  if (true_counts.population_size() != observed.population_size()) return 0.0;
  if (delta == 0.0 || k < 2) return true_counts == observed ? 1.0 : 0.0;

  std::vector<ActionDistribution> reporters;
  reporters.reserve(static_cast<std::size_t>(true_counts.population_size()));
  for (std::size_t n = 0; n < k; ++n) {
    std::vector<double> report(k, delta / static_cast<double>(k - 1));
    report[n] = 1.0 - delta;
    for (int i = 0; i < true_counts.counts[n]; ++i) reporters.emplace_back(report);
  }
  if (reporters.empty()) return 1.0;
  const auto dist = config_distribution(reporters);
  const auto it = dist.find(observed);
  return it == dist.end() ? 0.0 : it->second;
}

PrivateObservationFunction uniform_misreport_w0(double delta) {
  return [delta](int, const Configuration& true_counts, const Configuration& observed) {
    return misreport_likelihood(true_counts, observed, delta);
  };
}

namespace {

ActionDistribution marginal_action(const AgentBelief& agent, int public_obs) {
  std::vector<double> q;
  for (std::size_t m = 0; m < agent.models.size(); ++m) {
    const auto& row = agent.models[m].policy.at(static_cast<std::size_t>(public_obs));
    if (q.empty()) q.assign(row.size(), 0.0);
    if (row.size() != q.size()) throw DimensionError("candidate models disagree on action count");
    for (std::size_t a = 0; a < q.size(); ++a) q[a] += agent.probabilities[m] * row[a];
  }
  // Renormalize against drift in the stored belief.
  double sum = 0.0;
  for (double v : q) sum += v;
  for (double& v : q) v /= sum;
  return ActionDistribution(std::move(q));
}

}  // namespace

ModelBelief belief_update_bu(const ModelBelief& belief, int self_action, int public_obs,
                             const PrivateObservation& obs,
                             const PrivateObservationFunction& w0) {
  const std::size_t n_agents = belief.agents.size();
  for (const auto& agent : belief.agents) {
    if (agent.models.empty() || agent.models.size() != agent.probabilities.size()) {
      throw DimensionError("every tracked agent needs one probability per candidate model");
    }
  }
  if (static_cast<std::size_t>(obs.observed_counts.population_size()) != n_agents) {
    throw DimensionError("observed counts do not cover the tracked agents");
  }
  const std::size_t k = obs.observed_counts.action_count();

  std::vector<ActionDistribution> marginals;
  marginals.reserve(n_agents);
  for (const auto& agent : belief.agents) marginals.push_back(marginal_action(agent, public_obs));

  ModelBelief updated = belief;
  for (std::size_t j = 0; j < n_agents; ++j) {
    std::vector<ActionDistribution> others;
    for (std::size_t i = 0; i < n_agents; ++i) {
      if (i != j) others.push_back(marginals[i]);
    }
    ConfigDistribution rest;
    if (others.empty()) {
      rest.emplace(Configuration::zeros(k), 1.0);
    } else {
      rest = config_distribution(others);
    }

    // Evidence for each possible action of agent j.
    std::vector<double> evidence(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
      for (const auto& [config, mass] : rest) {
        Configuration full = config;
        ++full.counts[a];
        evidence[a] += mass * w0(self_action, full, obs.observed_counts);
      }
    }

    const AgentBelief& prior = belief.agents[j];
    AgentBelief& post = updated.agents[j];
    double total = 0.0;
    for (std::size_t m = 0; m < prior.models.size(); ++m) {
      const auto& row = prior.models[m].policy.at(static_cast<std::size_t>(public_obs));
      double like = 0.0;
      for (std::size_t a = 0; a < k; ++a) like += row[a] * evidence[a];
      post.probabilities[m] = prior.probabilities[m] * like;
      total += post.probabilities[m];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw DegenerateEvidenceError("observation has zero likelihood under every model of agent " +
                                    std::to_string(j));
    }
    for (double& p : post.probabilities) p /= total;
  }
  return updated;
}

}  // namespace lia2c::pop
