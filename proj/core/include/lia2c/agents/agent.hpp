#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "lia2c/agents/actor_critic.hpp"
#include "lia2c/latent/encoder_decoder.hpp"
#include "lia2c/population/types.hpp"

namespace lia2c::agents {

struct AgentConfig {
  Variant variant = Variant::kLia2c;
  AgentDims dims;
  BundleConfig bundle;
  nn::AdamConfig ed_adam;
  /// Misreport rate the agent assumes when rectifying its private counts.
  double assumed_delta = 0.0;
  /// Feed the conjugate posterior mean to the encoder instead of the
  /// decoder's previous output.
  bool encoder_theta_from_conjugate = false;
  bool learn_ed = true;
};

/// Independent random streams owned by one agent.
struct AgentSeeds {
  std::uint64_t init = 0;
  std::uint64_t policy = 0;
  std::uint64_t latent = 0;
};

/// Environment signals delivered to an agent after each tick.
struct StepFeedback {
  double reward = 0.0;
  pop::Configuration observed_counts;  // private observation of the others
  int next_public_obs = 0;
  bool done = false;
  int next_population_size = 0;  // number of others at the next tick
};

/// What the agent's population model predicts for the next tick.
struct StepPrediction {
  std::vector<double> theta;            // predicted action distribution of the others
  std::vector<double> obs;              // next public observation scores; empty for ia2cdm
  std::vector<double> latent;           // z_t; empty for ia2cdm
  pop::Configuration rectified;
};

struct EpisodeStats {
  double episode_return = 0.0;
  std::size_t steps = 0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  latent::EdLossBreakdown ed_loss;
  bool learned = false;
};

/// One decentralized learner: actor-critic bundle, Dirichlet population
/// model and (for the latent variants) the encoder-decoder. Holds no
/// reference to any other agent.
class Agent {
 public:
  Agent(int id, AgentConfig config, AgentSeeds seeds);

  int id() const { return id_; }
  const AgentConfig& config() const { return config_; }

  /// Resets the Dirichlet prior to all-ones and clears the trajectory.
  void begin_episode(int population_size);

  /// Samples an action from the actor for this tick's public observation.
  int act(int public_obs);

  /// Rectifies the private counts, updates the Dirichlet, encodes the step
  /// and stores the transition.
  const StepPrediction& observe(const StepFeedback& feedback);

  /// Runs one encoder-decoder, critic and actor update on the episode's
  /// trajectory when `learn` is set.
  EpisodeStats end_episode(bool learn = true);

  const AgentBundle& bundle() const { return bundle_; }
  AgentBundle& bundle() { return bundle_; }
  const latent::EncoderDecoder* latent_model() const {
    return latent_ ? &*latent_ : nullptr;
  }
  latent::EncoderDecoder* latent_model() { return latent_ ? &*latent_ : nullptr; }
  const pop::DirichletParams& alpha() const { return alpha_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const latent::EdBatch& ed_batch() const { return ed_batch_; }
  int population_size() const { return population_size_; }

 private:
  int id_;
  AgentConfig config_;
  std::mt19937_64 init_rng_;
  std::mt19937_64 policy_rng_;
  std::mt19937_64 latent_rng_;
  AgentBundle bundle_;
  std::optional<latent::EncoderDecoder> latent_;

  pop::DirichletParams alpha_;
  pop::ActionDistribution theta_input_;
  int population_size_ = 0;
  int pending_obs_ = 0;
  int pending_action_ = 0;
  bool awaiting_feedback_ = false;
  double episode_return_ = 0.0;
  std::vector<Transition> transitions_;
  latent::EdBatch ed_batch_;
  StepPrediction prediction_;
};

}  // namespace lia2c::agents
