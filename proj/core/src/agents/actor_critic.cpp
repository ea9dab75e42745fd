#include "lia2c/agents/actor_critic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lia2c/error.hpp"

namespace lia2c::agents {
namespace {

std::vector<std::size_t> layers(std::size_t in, const std::vector<std::size_t>& hidden,
                                std::size_t out) {
  std::vector<std::size_t> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

void check_finite(std::span<const double> g, const char* what) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw NonFiniteError(what, i);
  }
}

nn::Matrix obs_one_hot(const AgentBundle& b, std::span<const Transition> batch) {
  nn::Matrix x = nn::Matrix::Zero(static_cast<Eigen::Index>(b.dims.obs_categories),
                                  static_cast<Eigen::Index>(batch.size()));
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const int o = batch[t].public_obs;
    if (o < 0 || static_cast<std::size_t>(o) >= b.dims.obs_categories) {
      throw DimensionError("public observation out of range");
    }
    x(o, static_cast<Eigen::Index>(t)) = 1.0;
  }
  return x;
}

// Q for every transition; next-step rows only for non-terminal ones.
nn::Vector critic_values(const AgentBundle& b, std::span<const Transition> batch, bool next) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  nn::Matrix x = nn::Matrix::Zero(static_cast<Eigen::Index>(b.critic_input_size()), n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto& tr = batch[static_cast<std::size_t>(t)];
    if (next && tr.done) continue;
    const auto f = critic_features(b, tr, next);
    x.col(t) = Eigen::Map<const nn::Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
  }
  return b.critic.forward_batch(x).row(0).transpose();
}

std::vector<double> td_advantage(const AgentBundle& b, std::span<const Transition> batch) {
  const nn::Vector q = critic_values(b, batch, false);
  const nn::Vector q_next = critic_values(b, batch, true);
  std::vector<double> adv(batch.size());
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(t);
    const double bootstrap = batch[t].done ? 0.0 : b.config.gamma * q_next(i);
    adv[t] = batch[t].reward + bootstrap - q(i);
  }
  return adv;
}

}  // namespace

Variant parse_variant(std::string_view name) {
  if (name == "lia2c") return Variant::kLia2c;
  if (name == "lia2c-wokld" || name == "lia2c_wokld") return Variant::kLia2cWokld;
  if (name == "ia2cdm") return Variant::kIa2cdm;
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kLia2c:
      return "lia2c";
    case Variant::kLia2cWokld:
      return "lia2c-wokld";
    case Variant::kIa2cdm:
      return "ia2cdm";
  }
  return "unknown";
}

AgentBundle::AgentBundle(Variant v, AgentDims d, BundleConfig c, std::mt19937_64& init_rng)
    : variant(v),
      dims(std::move(d)),
      config(c),
      actor(layers(dims.obs_categories, dims.hidden, dims.self_actions), nn::Activation::kTanh,
            nn::Head::kSoftmax),
      critic(layers(critic_input_size(), dims.hidden, 1), nn::Activation::kTanh,
             nn::Head::kLinear) {
  actor.initialize(init_rng);
  critic.initialize(init_rng);
  actor_opt = nn::AdamState(actor.parameters().size(), config.actor_adam);
  critic_opt = nn::AdamState(critic.parameters().size(), config.critic_adam);
}

std::size_t AgentBundle::critic_input_size() const {
  const std::size_t base = dims.obs_categories + dims.self_actions + dims.population_actions;
  return uses_latent(variant) ? base + dims.latent_dim : base;
}

std::vector<double> action_probabilities(const nn::Mlp& actor, int public_obs) {
  std::vector<double> x(actor.input_size(), 0.0);
  if (public_obs < 0 || static_cast<std::size_t>(public_obs) >= x.size()) {
    throw DimensionError("public observation out of range");
  }
  x[static_cast<std::size_t>(public_obs)] = 1.0;
  const nn::Vector p = actor.forward(x);
  return std::vector<double>(p.data(), p.data() + p.size());
}

int select_action(const nn::Mlp& actor, int public_obs, std::mt19937_64& rng) {
  const auto p = action_probabilities(actor, public_obs);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  double acc = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    acc += p[a];
    if (r < acc) return static_cast<int>(a);
  }
  return static_cast<int>(p.size() - 1);
}

int select_action(const AgentBundle& bundle, int public_obs, std::mt19937_64& rng) {
  return select_action(bundle.actor, public_obs, rng);
}

std::vector<double> critic_features(const AgentBundle& b, const Transition& t, bool next) {
  const int o = next ? t.next_public_obs : t.public_obs;
  const int a = next ? t.next_action : t.action;
  if (o < 0 || static_cast<std::size_t>(o) >= b.dims.obs_categories || a < 0 ||
      static_cast<std::size_t>(a) >= b.dims.self_actions) {
    throw DimensionError("transition observation or action out of range");
  }
  std::vector<double> x;
  x.reserve(b.critic_input_size());
  const auto& population = uses_latent(b.variant)
                               ? (next ? t.next_private_obs : t.private_obs)
                               : (next ? t.next_configuration_prediction
                                       : t.configuration_prediction);
  if (uses_latent(b.variant)) {
    const auto& z = next ? t.next_latent : t.latent;
    if (z.size() != b.dims.latent_dim) {
      throw std::logic_error("latent critic input missing from transition");
    }
    x.insert(x.end(), z.begin(), z.end());
  }
  if (population.size() != b.dims.population_actions) {
    throw std::logic_error("population input missing from transition");
  }
  for (std::size_t i = 0; i < b.dims.obs_categories; ++i) x.push_back(i == static_cast<std::size_t>(o));
  for (std::size_t i = 0; i < b.dims.self_actions; ++i) x.push_back(i == static_cast<std::size_t>(a));
  x.insert(x.end(), population.begin(), population.end());
  return x;
}

std::vector<double> lia2c_advantage(const AgentBundle& bundle, std::span<const Transition> batch) {
  if (!uses_latent(bundle.variant)) throw std::logic_error("bundle has no latent critic");
  return td_advantage(bundle, batch);
}

std::vector<double> ia2cdm_advantage(const AgentBundle& bundle,
                                     std::span<const Transition> batch) {
  if (uses_latent(bundle.variant)) throw std::logic_error("bundle has a latent critic");
  return td_advantage(bundle, batch);
}

std::vector<double> compute_advantages(const AgentBundle& bundle,
                                       std::span<const Transition> batch) {
  return uses_latent(bundle.variant) ? lia2c_advantage(bundle, batch)
                                     : ia2cdm_advantage(bundle, batch);
}

double actor_loss(const AgentBundle& b, std::span<const Transition> batch,
                  std::span<const double> advantages, std::vector<double>* grad) {
  if (advantages.size() != batch.size()) throw DimensionError("one advantage per transition");
  if (batch.empty()) {
    if (grad) grad->assign(b.actor.parameters().size(), 0.0);
    return 0.0;
  }
  nn::Tape tape;
  const nn::Matrix p = b.actor.forward_batch(obs_one_hot(b, batch), tape);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const double beta = b.config.entropy_weight;
  nn::Matrix dlogits = nn::Matrix::Zero(p.rows(), p.cols());
  double objective = 0.0;
  for (Eigen::Index t = 0; t < p.cols(); ++t) {
    const auto& tr = batch[static_cast<std::size_t>(t)];
    const double adv = advantages[static_cast<std::size_t>(t)];
    // log-softmax from the logits avoids log(0) for saturated policies.
    const double mx = tape.logits.col(t).maxCoeff();
    const double log_pa = tape.logits(tr.action, t) - mx -
                          std::log((tape.logits.col(t).array() - mx).exp().sum());
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < p.rows(); ++k) {
      if (p(k, t) > 0.0) entropy -= p(k, t) * std::log(p(k, t));
    }
    objective += adv * log_pa + beta * entropy;
    for (Eigen::Index k = 0; k < p.rows(); ++k) {
      const double pk = p(k, t);
      const double d_logp = (k == tr.action ? 1.0 : 0.0) - pk;
      const double d_entropy = pk > 0.0 ? -pk * (std::log(pk) + entropy) : 0.0;
      // Gradient of the negated objective.
      dlogits(k, t) = -(adv * d_logp + beta * d_entropy) * inv_n;
    }
  }
  if (grad != nullptr) {
    grad->assign(b.actor.parameters().size(), 0.0);
    b.actor.backward_logits(tape, dlogits, *grad);
  }
  return -objective * inv_n;
}

UpdateStats actor_update(AgentBundle& b, std::span<const Transition> batch,
                         std::span<const double> advantages) {
  std::vector<double> grad;
  UpdateStats stats;
  stats.loss = actor_loss(b, batch, advantages, &grad);
  if (!std::isfinite(stats.loss)) throw NonFiniteError("actor loss is not finite", 0);
  check_finite(grad, "actor gradient");
  stats.grad_norm = nn::clip_global_norm(grad, b.config.clip_norm);
  nn::adam_step(b.actor_opt, b.actor.parameters(), grad);
  return stats;
}

std::vector<double> critic_targets(const AgentBundle& b, std::span<const Transition> batch) {
  const nn::Vector q_next = critic_values(b, batch, true);
  std::vector<double> y(batch.size());
  for (std::size_t t = 0; t < batch.size(); ++t) {
    y[t] = batch[t].reward +
           (batch[t].done ? 0.0 : b.config.gamma * q_next(static_cast<Eigen::Index>(t)));
  }
  return y;
}

double critic_loss(const AgentBundle& b, std::span<const Transition> batch,
                   std::span<const double> targets, std::vector<double>* grad) {
  if (targets.size() != batch.size()) throw DimensionError("one target per transition");
  if (batch.empty()) {
    if (grad) grad->assign(b.critic.parameters().size(), 0.0);
    return 0.0;
  }
  const auto n = static_cast<Eigen::Index>(batch.size());
  nn::Matrix x(static_cast<Eigen::Index>(b.critic_input_size()), n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto f = critic_features(b, batch[static_cast<std::size_t>(t)], false);
    x.col(t) = Eigen::Map<const nn::Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
  }
  nn::Tape tape;
  const nn::Matrix q = b.critic.forward_batch(x, tape);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  nn::Matrix dq(1, n);
  double loss = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double diff = q(0, t) - targets[static_cast<std::size_t>(t)];
    loss += diff * diff;
    dq(0, t) = 2.0 * diff * inv_n;
  }
  if (grad != nullptr) {
    grad->assign(b.critic.parameters().size(), 0.0);
    b.critic.backward(tape, dq, *grad);
  }
  return loss * inv_n;
}

UpdateStats critic_update(AgentBundle& b, std::span<const Transition> batch) {
  const auto targets = critic_targets(b, batch);
  std::vector<double> grad;
  UpdateStats stats;
  stats.loss = critic_loss(b, batch, targets, &grad);
  if (!std::isfinite(stats.loss)) throw NonFiniteError("critic loss is not finite", 0);
  check_finite(grad, "critic gradient");
  stats.grad_norm = nn::clip_global_norm(grad, b.config.clip_norm);
  nn::adam_step(b.critic_opt, b.critic.parameters(), grad);
  return stats;
}

}  // namespace lia2c::agents
