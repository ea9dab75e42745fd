#pragma once

#include <map>
#include <random>
#include <span>
#include <vector>

#include "lia2c/population/types.hpp"

namespace lia2c::pop {

enum class LikelihoodForm {
  kOrdered,      // prod theta_n^{#a_n}: probability of one ordered realization
  kMultinomial,  // ordered form times the multinomial coefficient
};

double config_likelihood(const ActionDistribution& t, const Configuration& c,
                         LikelihoodForm form = LikelihoodForm::kOrdered);

/// All count vectors of length `action_count` summing to `population_size`,
/// in lexicographic order.
std::vector<Configuration> enumerate_configs(int population_size, std::size_t action_count);

using ConfigDistribution = std::map<Configuration, double>;

/// Exact distribution of the count vector when each agent independently
/// draws from its own categorical; agents are folded in one at a time.
ConfigDistribution config_distribution(std::span<const ActionDistribution> per_agent);

/// Multinomial draw of `population_size` agents from `t`.
Configuration sample_configuration(const ActionDistribution& t, int population_size,
                                   std::mt19937_64& rng);

}  // namespace lia2c::pop
