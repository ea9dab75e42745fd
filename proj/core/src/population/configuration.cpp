#include "lia2c/population/configuration.hpp"

#include <algorithm>
#include <cmath>

#include "lia2c/error.hpp"

namespace lia2c::pop {
namespace {

void enumerate_into(int remaining, std::size_t index, std::vector<int>& current,
                    std::vector<Configuration>& out) {
  if (index + 1 == current.size()) {
    current[index] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current[index] = k;
    enumerate_into(remaining - k, index + 1, current, out);
  }
}

}  // namespace

double config_likelihood(const ActionDistribution& t, const Configuration& c,
                         LikelihoodForm form) {
  if (t.size() != c.action_count()) {
    throw DimensionError("config_likelihood: dimensions differ");
  }
  double log_p = 0.0;
  for (std::size_t n = 0; n < c.action_count(); ++n) {
    const int k = c.counts[n];
    if (k == 0) continue;
    if (t[n] == 0.0) return 0.0;
    log_p += k * std::log(t[n]);
  }
  if (form == LikelihoodForm::kMultinomial) {
    log_p += std::lgamma(c.population_size() + 1.0);
    for (int k : c.counts) log_p -= std::lgamma(k + 1.0);
  }
  return std::exp(log_p);
}

std::vector<Configuration> enumerate_configs(int population_size, std::size_t action_count) {
  if (population_size < 0) throw InvalidDistributionError("negative population size");
  if (action_count == 0) throw DimensionError("enumerate_configs needs at least one action");
  std::vector<Configuration> out;
  std::vector<int> current(action_count, 0);
  enumerate_into(population_size, 0, current, out);
  return out;
}

ConfigDistribution config_distribution(std::span<const ActionDistribution> per_agent) {
  if (per_agent.empty()) {
    throw DimensionError("config_distribution needs the action count of at least one agent");
  }
  const std::size_t k = per_agent.front().size();
  ConfigDistribution dist;
  dist.emplace(Configuration::zeros(k), 1.0);
  for (const auto& agent : per_agent) {
    if (agent.size() != k) throw DimensionError("agents disagree on the action count");
    ConfigDistribution next;
    for (const auto& [config, mass] : dist) {
      for (std::size_t n = 0; n < k; ++n) {
        if (agent[n] == 0.0) continue;
        Configuration c = config;
        ++c.counts[n];
        next[c] += mass * agent[n];
      }
    }
    dist = std::move(next);
  }
  return dist;
}

Configuration sample_configuration(const ActionDistribution& t, int population_size,
                                   std::mt19937_64& rng) {
  std::vector<int> counts(t.size(), 0);
  int remaining = population_size;
  double rest = 1.0;
  for (std::size_t n = 0; n + 1 < t.size() && remaining > 0; ++n) {
    const double p = rest > 0.0 ? std::clamp(t[n] / rest, 0.0, 1.0) : 0.0;
    std::binomial_distribution<int> draw(remaining, p);
    counts[n] = draw(rng);
    remaining -= counts[n];
    rest -= t[n];
  }
  counts.back() += remaining;
  return Configuration(std::move(counts));
}

}  // namespace lia2c::pop
