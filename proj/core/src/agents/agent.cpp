#include "lia2c/agents/agent.hpp"

#include <stdexcept>

#include "lia2c/error.hpp"
#include "lia2c/population/configuration.hpp"
#include "lia2c/population/dirichlet.hpp"
#include "lia2c/population/rectify.hpp"

namespace lia2c::agents {
namespace {

latent::LatentDims latent_dims(const AgentDims& d) {
  latent::LatentDims l;
  l.obs_categories = d.obs_categories;
  l.self_actions = d.self_actions;
  l.population_actions = d.population_actions;
  l.latent_dim = d.latent_dim;
  l.hidden = d.hidden;
  return l;
}

std::vector<double> normalized(const pop::Configuration& c) {
  std::vector<double> out(c.action_count(), 0.0);
  const int n = c.population_size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(c.counts[i]) / static_cast<double>(n);
  }
  return out;
}

}  // namespace

Agent::Agent(int id, AgentConfig config, AgentSeeds seeds)
    : id_(id),
      config_(std::move(config)),
      init_rng_(seeds.init),
      policy_rng_(seeds.policy),
      latent_rng_(seeds.latent),
      bundle_(config_.variant, config_.dims, config_.bundle, init_rng_),
      alpha_(pop::DirichletParams::uniform(config_.dims.population_actions)),
      theta_input_(pop::ActionDistribution::uniform(config_.dims.population_actions)) {
  if (uses_latent(config_.variant)) {
    latent_.emplace(latent_dims(config_.dims), init_rng_, config_.ed_adam,
                    config_.bundle.clip_norm);
  }
}

void Agent::begin_episode(int population_size) {
  alpha_ = pop::DirichletParams::uniform(config_.dims.population_actions);
  theta_input_ = pop::ActionDistribution::uniform(config_.dims.population_actions);
  population_size_ = population_size;
  awaiting_feedback_ = false;
  episode_return_ = 0.0;
  transitions_.clear();
  ed_batch_.clear();
}

int Agent::act(int public_obs) {
  if (awaiting_feedback_) throw std::logic_error("act called twice without observe");
  pending_obs_ = public_obs;
  pending_action_ = select_action(bundle_, public_obs, policy_rng_);
  awaiting_feedback_ = true;
  return pending_action_;
}

const StepPrediction& Agent::observe(const StepFeedback& fb) {
  if (!awaiting_feedback_) throw std::logic_error("observe called without a pending action");
  awaiting_feedback_ = false;
  const std::size_t k = config_.dims.population_actions;
  if (fb.observed_counts.action_count() != k) {
    throw DimensionError("private observation has the wrong number of action categories");
  }
  const int n = fb.observed_counts.population_size();
  const pop::Configuration rectified =
      pop::rectify_observation({fb.observed_counts, config_.assumed_delta}, k);

  Transition tr;
  tr.public_obs = pending_obs_;
  tr.action = pending_action_;
  tr.reward = fb.reward;
  tr.private_obs = normalized(fb.observed_counts);
  tr.next_public_obs = fb.next_public_obs;
  tr.done = fb.done;

  prediction_ = StepPrediction{};
  prediction_.rectified = rectified;

  std::optional<pop::ActionDistribution> decoded_theta;
  if (latent_) {
    latent::EncoderInput input{pending_obs_, tr.private_obs, pending_action_, theta_input_};
    const auto z = latent_->encode(input);
    const auto dec = latent_->decode(z);
    const double scale = alpha_.total() + rectified.population_size();
    tr.latent = z.z;
    tr.population_prediction = latent_->predict_next_population(z, scale, latent_rng_).theta();
    prediction_.theta = dec.theta_prediction.theta();
    prediction_.obs = dec.obs_prediction;
    prediction_.latent = z.z;
    decoded_theta = dec.theta_prediction;
    ed_batch_.push_back(latent::EdStep{std::move(input), fb.next_public_obs, rectified, alpha_});
  } else {
    const auto theta = pop::sample_theta(alpha_, latent_rng_);
    tr.configuration_prediction = normalized(pop::sample_configuration(theta, n, latent_rng_));
  }

  alpha_ = pop::posterior_update(alpha_, rectified);
  if (!latent_) prediction_.theta = pop::mean_action(alpha_).theta();
  if (decoded_theta) {
    theta_input_ = config_.encoder_theta_from_conjugate ? pop::mean_action(alpha_) : *decoded_theta;
  }
  if (fb.next_population_size != n) {
    alpha_ = pop::resize_population(alpha_, n, fb.next_population_size);
  }
  population_size_ = fb.next_population_size;

  if (!transitions_.empty() && !transitions_.back().done) {
    Transition& prev = transitions_.back();
    prev.next_private_obs = tr.private_obs;
    prev.next_action = tr.action;
    prev.next_latent = tr.latent;
    prev.next_configuration_prediction = tr.configuration_prediction;
  }
  episode_return_ += fb.reward;
  transitions_.push_back(std::move(tr));
  return prediction_;
}

EpisodeStats Agent::end_episode(bool learn) {
  if (awaiting_feedback_) throw std::logic_error("episode ended with an action awaiting feedback");
  EpisodeStats stats;
  stats.episode_return = episode_return_;
  stats.steps = transitions_.size();
  if (!transitions_.empty()) transitions_.back().done = true;

  if (learn && !transitions_.empty()) {
    const auto adv = compute_advantages(bundle_, transitions_);
    if (latent_ && config_.learn_ed) {
      stats.ed_loss =
          latent_->train_step(ed_batch_, config_.variant == Variant::kLia2c, latent_rng_);
    }
    stats.critic_loss = critic_update(bundle_, transitions_).loss;
    stats.actor_loss = actor_update(bundle_, transitions_, adv).loss;
    stats.learned = true;
  }
  transitions_.clear();
  ed_batch_.clear();
  episode_return_ = 0.0;
  return stats;
}

}  // namespace lia2c::agents
