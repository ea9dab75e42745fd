#pragma once

#include <random>

#include "lia2c/population/types.hpp"

namespace lia2c::pop {

/// log of Gamma(sum a) / prod Gamma(a_n) * prod theta_n^(a_n - 1).
/// Throws InfiniteDensityError when some theta_n == 0 with alpha_n < 1.
double log_dirichlet_density(const DirichletParams& p, const ActionDistribution& t);
double dirichlet_density(const DirichletParams& p, const ActionDistribution& t);

/// Normalized independent Gamma(alpha_n, 1) draws.
ActionDistribution sample_theta(const DirichletParams& p, std::mt19937_64& rng);

/// alpha / sum(alpha).
ActionDistribution mean_action(const DirichletParams& p);

/// Conjugate update alpha + counts.
DirichletParams posterior_update(const DirichletParams& p, const Configuration& rectified);

/// Closed-form KL(Dir(p) || Dir(q)).
double dirichlet_kl(const DirichletParams& p, const DirichletParams& q);

/// Rescales alpha so its total tracks a population change from `old_size`
/// to `new_size` others while keeping the mean. No-op if either size is 0.
DirichletParams resize_population(const DirichletParams& p, int old_size, int new_size);

}  // namespace lia2c::pop
