#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "lia2c/nn/adam.hpp"
#include "lia2c/nn/mlp.hpp"

namespace lia2c::agents {

enum class Variant { kLia2c, kLia2cWokld, kIa2cdm };

Variant parse_variant(std::string_view name);
std::string_view variant_name(Variant v);
inline bool uses_latent(Variant v) { return v != Variant::kIa2cdm; }

struct AgentDims {
  std::size_t obs_categories = 3;
  std::size_t self_actions = 3;
  std::size_t population_actions = 3;
  std::size_t latent_dim = 16;
  std::vector<std::size_t> hidden = {64, 64};
};

/// One step of experience as seen by a single agent.
///
/// `latent`/`next_latent` are filled for the latent variants,
/// `configuration_prediction`/`next_configuration_prediction` (normalized
/// counts) for the configuration-critic baseline. Next-step fields are unused
/// when `done` is set.
struct Transition {
  int public_obs = 0;
  int next_public_obs = 0;
  std::vector<double> private_obs;
  std::vector<double> next_private_obs;
  int action = 0;
  int next_action = 0;
  double reward = 0.0;
  std::vector<double> latent;
  std::vector<double> next_latent;
  std::vector<double> population_prediction;
  std::vector<double> configuration_prediction;
  std::vector<double> next_configuration_prediction;
  bool done = false;
};

struct BundleConfig {
  double gamma = 0.9;
  double entropy_weight = 0.01;
  double clip_norm = 5.0;
  nn::AdamConfig actor_adam;
  nn::AdamConfig critic_adam;
};

/// Actor (softmax over own actions, public observation input) and critic
/// (scalar Q) owned by exactly one agent.
struct AgentBundle {
  AgentBundle(Variant variant, AgentDims dims, BundleConfig config, std::mt19937_64& init_rng);

  std::size_t critic_input_size() const;

  Variant variant;
  AgentDims dims;
  BundleConfig config;
  nn::Mlp actor;
  nn::Mlp critic;
  nn::AdamState actor_opt;
  nn::AdamState critic_opt;
};

std::vector<double> action_probabilities(const nn::Mlp& actor, int public_obs);
int select_action(const AgentBundle& bundle, int public_obs, std::mt19937_64& rng);
int select_action(const nn::Mlp& actor, int public_obs, std::mt19937_64& rng);

/// Critic input for the current (`next == false`) or next step of `t`.
std::vector<double> critic_features(const AgentBundle& bundle, const Transition& t, bool next);

/// r + gamma Q(z', o'', a0', w'') - Q(z, o', a0, w'), bootstrap dropped on done.
std::vector<double> lia2c_advantage(const AgentBundle& bundle, std::span<const Transition> batch);
/// r + gamma Q(o'', a0', C') - Q(o', a0, C), bootstrap dropped on done.
std::vector<double> ia2cdm_advantage(const AgentBundle& bundle, std::span<const Transition> batch);
std::vector<double> compute_advantages(const AgentBundle& bundle,
                                       std::span<const Transition> batch);

struct UpdateStats {
  double loss = 0.0;
  double grad_norm = 0.0;
};

/// Negated batch mean of log pi(a|o) * A + entropy_weight * H(pi(.|o)).
/// Gradient (of this loss) written to `grad` when non-null.
double actor_loss(const AgentBundle& bundle, std::span<const Transition> batch,
                  std::span<const double> advantages, std::vector<double>* grad = nullptr);

/// One ascent step on the policy-gradient objective; advantages are constants.
UpdateStats actor_update(AgentBundle& bundle, std::span<const Transition> batch,
                         std::span<const double> advantages);

/// TD(0) targets r + gamma Q(next), or r on terminal steps, under the current critic.
std::vector<double> critic_targets(const AgentBundle& bundle, std::span<const Transition> batch);

/// Mean squared error of Q against fixed targets.
double critic_loss(const AgentBundle& bundle, std::span<const Transition> batch,
                   std::span<const double> targets, std::vector<double>* grad = nullptr);

/// One descent step on the TD regression with the bootstrap held fixed.
UpdateStats critic_update(AgentBundle& bundle, std::span<const Transition> batch);

}  // namespace lia2c::agents
