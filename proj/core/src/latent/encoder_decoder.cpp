#include "lia2c/latent/encoder_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lia2c/error.hpp"
#include "lia2c/population/configuration.hpp"
#include "lia2c/population/dirichlet.hpp"

namespace lia2c::latent {
namespace {

std::vector<std::size_t> with_ends(std::size_t in, const std::vector<std::size_t>& hidden,
                                   std::size_t out) {
  std::vector<std::size_t> sizes;
  sizes.push_back(in);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

pop::ActionDistribution floor_theta(std::span<const double> theta) {
  std::vector<double> c(theta.begin(), theta.end());
  double sum = 0.0;
  for (double& v : c) {
    v = std::max(v, kThetaFloor);
    sum += v;
  }
  for (double& v : c) v /= sum;
  return pop::ActionDistribution(std::move(c));
}

EncoderDecoder::EncoderDecoder(LatentDims dims, std::mt19937_64& init_rng, nn::AdamConfig adam,
                               double clip_norm)
    : dims_(std::move(dims)),
      encoder_(with_ends(dims_.encoder_input_size(), dims_.hidden, dims_.latent_dim),
               nn::Activation::kTanh, nn::Head::kLinear),
      obs_head_(with_ends(dims_.latent_dim, dims_.hidden, dims_.obs_categories),
                nn::Activation::kTanh, nn::Head::kLinear),
      theta_head_(with_ends(dims_.latent_dim, dims_.hidden, dims_.population_actions),
                  nn::Activation::kTanh, nn::Head::kSoftmax),
      clip_norm_(clip_norm) {
  encoder_.initialize(init_rng);
  obs_head_.initialize(init_rng);
  theta_head_.initialize(init_rng);
  adam_ = nn::AdamState(parameter_count(), adam);
}

std::vector<double> EncoderDecoder::encoder_features(const EncoderInput& input) const {
  if (input.public_obs < 0 || static_cast<std::size_t>(input.public_obs) >= dims_.obs_categories ||
      input.self_action < 0 || static_cast<std::size_t>(input.self_action) >= dims_.self_actions ||
      input.private_obs.size() != dims_.population_actions ||
      input.theta.size() != dims_.population_actions) {
    throw DimensionError("encoder input does not match the latent model dimensions");
  }
  std::vector<double> x(dims_.encoder_input_size(), 0.0);
  std::size_t at = 0;
  x[at + static_cast<std::size_t>(input.public_obs)] = 1.0;
  at += dims_.obs_categories;
  std::copy(input.private_obs.begin(), input.private_obs.end(), x.begin() + static_cast<long>(at));
  at += dims_.population_actions;
  x[at + static_cast<std::size_t>(input.self_action)] = 1.0;
  at += dims_.self_actions;
  std::copy(input.theta.theta().begin(), input.theta.theta().end(),
            x.begin() + static_cast<long>(at));
  return x;
}

LatentEmbedding EncoderDecoder::encode(const EncoderInput& input) const {
  const auto x = encoder_features(input);
  const nn::Vector z = encoder_.forward(x);
  return LatentEmbedding{std::vector<double>(z.data(), z.data() + z.size())};
}

DecoderOutput EncoderDecoder::decode(const LatentEmbedding& z) const {
  if (z.z.size() != dims_.latent_dim) throw DimensionError("latent embedding has wrong length");
  const nn::Vector o = obs_head_.forward(z.z);
  const nn::Vector t = theta_head_.forward(z.z);
  std::vector<double> theta(t.data(), t.data() + t.size());
  // Re-close the simplex after exp/normalize rounding.
  double sum = 0.0;
  for (double v : theta) sum += v;
  for (double& v : theta) v /= sum;
  return DecoderOutput{std::vector<double>(o.data(), o.data() + o.size()),
                       pop::ActionDistribution(std::move(theta))};
}

void EncoderDecoder::check_batch(const EdBatch& batch) const {
  if (batch.empty()) throw DimensionError("encoder-decoder batch is empty");
  for (const auto& step : batch) {
    if (step.rectified.action_count() != dims_.population_actions ||
        step.prior.size() != dims_.population_actions ||
        step.next_public_obs < 0 ||
        static_cast<std::size_t>(step.next_public_obs) >= dims_.obs_categories) {
      throw DimensionError("encoder-decoder batch step has inconsistent dimensions");
    }
  }
}

std::vector<pop::Configuration> EncoderDecoder::sample_kl_configurations(
    const EdBatch& batch, std::mt19937_64& rng) const {
  check_batch(batch);
  std::vector<pop::Configuration> samples;
  samples.reserve(batch.size());
  for (const auto& step : batch) {
    const auto z = encode(step.input);
    const nn::Vector t = theta_head_.forward(z.z);
    const auto theta = floor_theta(std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
    samples.push_back(pop::sample_configuration(theta, step.rectified.population_size(), rng));
  }
  return samples;
}

EdLossBreakdown EncoderDecoder::evaluate(const EdBatch& batch,
                                         std::span<const pop::Configuration> samples,
                                         bool include_kl, std::vector<double>* grad) const {
  check_batch(batch);
  if (include_kl && samples.size() != batch.size()) {
    throw DimensionError("one sampled configuration per batch step is required");
  }
  const auto h = static_cast<Eigen::Index>(batch.size());
  const double inv_h = 1.0 / static_cast<double>(batch.size());
  const auto k = static_cast<Eigen::Index>(dims_.population_actions);

  nn::Matrix x(static_cast<Eigen::Index>(dims_.encoder_input_size()), h);
  for (Eigen::Index t = 0; t < h; ++t) {
    const auto f = encoder_features(batch[static_cast<std::size_t>(t)].input);
    x.col(t) = Eigen::Map<const nn::Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
  }
  nn::Tape enc_tape, obs_tape, theta_tape;
  const nn::Matrix z = encoder_.forward_batch(x, enc_tape);
  const nn::Matrix o = obs_head_.forward_batch(z, obs_tape);
  const nn::Matrix p = theta_head_.forward_batch(z, theta_tape);

  EdLossBreakdown out;
  nn::Matrix d_obs = nn::Matrix::Zero(o.rows(), h);
  nn::Matrix d_theta = nn::Matrix::Zero(k, h);
  for (Eigen::Index t = 0; t < h; ++t) {
    const auto& step = batch[static_cast<std::size_t>(t)];

    for (Eigen::Index i = 0; i < o.rows(); ++i) {
      const double target = i == step.next_public_obs ? 1.0 : 0.0;
      const double diff = o(i, t) - target;
      out.reconstruction += diff * diff;
      d_obs(i, t) = 2.0 * diff * inv_h;
    }

    const pop::DirichletParams posterior = pop::posterior_update(step.prior, step.rectified);
    std::vector<double> clamped(static_cast<std::size_t>(k));
    double s = 0.0;
    for (Eigen::Index n = 0; n < k; ++n) {
      clamped[static_cast<std::size_t>(n)] = std::max(p(n, t), kThetaFloor);
      s += clamped[static_cast<std::size_t>(n)];
    }
    std::vector<double> floored(clamped);
    for (double& v : floored) v /= s;
    out.posterior -= pop::log_dirichlet_density(posterior, pop::ActionDistribution(floored));

    // -log Dir = const - sum w_n log c_n + W log S, with w = beta - 1.
    double w_total = 0.0;
    for (double b : posterior.alpha()) w_total += b - 1.0;
    for (Eigen::Index n = 0; n < k; ++n) {
      if (p(n, t) > kThetaFloor) {
        const double w = posterior.alpha()[static_cast<std::size_t>(n)] - 1.0;
        d_theta(n, t) = (-w / clamped[static_cast<std::size_t>(n)] + w_total / s) * inv_h;
      }
    }

    if (include_kl) {
      std::vector<double> smoothed(static_cast<std::size_t>(k));
      const auto& sampled = samples[static_cast<std::size_t>(t)];
      if (sampled.action_count() != static_cast<std::size_t>(k)) {
        throw DimensionError("sampled configuration has wrong length");
      }
      for (Eigen::Index n = 0; n < k; ++n) {
        smoothed[static_cast<std::size_t>(n)] = sampled.counts[static_cast<std::size_t>(n)] + 1.0;
      }
      out.kl += pop::dirichlet_kl(pop::DirichletParams(std::move(smoothed)), posterior);
    }
  }
  out.reconstruction *= inv_h;
  out.posterior *= inv_h;
  out.kl *= inv_h;
  out.total = out.reconstruction + out.posterior + out.kl;

  if (grad != nullptr) {
    grad->assign(parameter_count(), 0.0);
    const std::size_t n_enc = encoder_.parameters().size();
    const std::size_t n_obs = obs_head_.parameters().size();
    std::span<double> g(*grad);
    const nn::Matrix dz_obs = obs_head_.backward(obs_tape, d_obs, g.subspan(n_enc, n_obs));
    const nn::Matrix dz_theta =
        theta_head_.backward(theta_tape, d_theta, g.subspan(n_enc + n_obs));
    encoder_.backward(enc_tape, dz_obs + dz_theta, g.subspan(0, n_enc));
  }
  return out;
}

EdLossBreakdown EncoderDecoder::loss(const EdBatch& batch, bool include_kl,
                                     std::mt19937_64& rng) const {
  const auto samples = sample_kl_configurations(batch, rng);
  return evaluate(batch, samples, include_kl, nullptr);
}

EdLossBreakdown EncoderDecoder::loss_with_samples(const EdBatch& batch,
                                                  std::span<const pop::Configuration> samples,
                                                  bool include_kl) const {
  return evaluate(batch, samples, include_kl, nullptr);
}

std::vector<double> EncoderDecoder::loss_gradient(const EdBatch& batch,
                                                  std::span<const pop::Configuration> samples,
                                                  bool include_kl, EdLossBreakdown* value) const {
  std::vector<double> grad;
  const auto v = evaluate(batch, samples, include_kl, &grad);
  if (value != nullptr) *value = v;
  return grad;
}

EdLossBreakdown EncoderDecoder::train_step(const EdBatch& batch, bool include_kl,
                                           std::mt19937_64& rng) {
  // Samples are drawn whether or not the KL term is used, so both loss
  // variants consume the latent stream identically.
  const auto samples = sample_kl_configurations(batch, rng);
  EdLossBreakdown value;
  auto grad = loss_gradient(batch, samples, include_kl, &value);
  if (!std::isfinite(value.total)) throw NonFiniteError("encoder-decoder loss is not finite", 0);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) throw NonFiniteError("encoder-decoder gradient", i);
  }
  nn::clip_global_norm(grad, clip_norm_);
  auto params = flat_parameters();
  nn::adam_step(adam_, params, grad);
  set_flat_parameters(params);
  return value;
}

pop::ActionDistribution EncoderDecoder::predict_next_population(const LatentEmbedding& z,
                                                                double scale,
                                                                std::mt19937_64& rng) const {
  if (!(scale > 0.0)) throw InvalidDistributionError("sampling scale must be positive");
  const auto mean = floor_theta(decode(z).theta_prediction.theta());
  std::vector<double> alpha(mean.theta());
  for (double& a : alpha) a *= scale;
  return pop::sample_theta(pop::DirichletParams(std::move(alpha)), rng);
}

pop::ActionDistribution EncoderDecoder::predict_next_population(const LatentEmbedding& z) const {
  return decode(z).theta_prediction;
}

std::size_t EncoderDecoder::parameter_count() const {
  return encoder_.parameters().size() + obs_head_.parameters().size() +
         theta_head_.parameters().size();
}

std::vector<double> EncoderDecoder::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const nn::Mlp* net : {&encoder_, &obs_head_, &theta_head_}) {
    out.insert(out.end(), net->parameters().begin(), net->parameters().end());
  }
  return out;
}

void EncoderDecoder::set_flat_parameters(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw DimensionError("flat parameter vector has length " + std::to_string(params.size()));
  }
  std::size_t at = 0;
  for (nn::Mlp* net : {&encoder_, &obs_head_, &theta_head_}) {
    const std::size_t n = net->parameters().size();
    net->set_parameters(params.subspan(at, n));
    at += n;
  }
}

std::uint64_t EncoderDecoder::parameter_hash() const {
  return nn::parameter_hash(flat_parameters());
}

}  // namespace lia2c::latent
