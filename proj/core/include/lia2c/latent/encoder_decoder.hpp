#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "lia2c/nn/adam.hpp"
#include "lia2c/nn/mlp.hpp"
#include "lia2c/population/types.hpp"

namespace lia2c::latent {

struct LatentDims {
  std::size_t obs_categories = 3;
  std::size_t self_actions = 3;
  std::size_t population_actions = 3;
  std::size_t latent_dim = 16;
  std::vector<std::size_t> hidden = {64, 64};

  std::size_t encoder_input_size() const {
    return obs_categories + 2 * population_actions + self_actions;
  }
};

/// One encoder step: public observation, private counts normalized by the
/// number of others, own action, and the current population estimate.
struct EncoderInput {
  int public_obs = 0;
  std::vector<double> private_obs;
  int self_action = 0;
  pop::ActionDistribution theta = pop::ActionDistribution::uniform(1);
};

struct LatentEmbedding {
  std::vector<double> z;
};

struct DecoderOutput {
  std::vector<double> obs_prediction;
  pop::ActionDistribution theta_prediction = pop::ActionDistribution::uniform(1);
};

struct EdStep {
  EncoderInput input;
  int next_public_obs = 0;
  pop::Configuration rectified;
  pop::DirichletParams prior = pop::DirichletParams::uniform(1);
};

using EdBatch = std::vector<EdStep>;

struct EdLossBreakdown {
  double total = 0.0;
  double reconstruction = 0.0;  // squared error of the next-observation head
  double posterior = 0.0;       // -log Dir(alpha + C'; theta head)
  double kl = 0.0;              // KL(Dir(C + 1) || Dir(alpha + C')), 0 when excluded
};

/// Lower bound applied to theta-head outputs before any log-density.
inline constexpr double kThetaFloor = 1e-6;

/// Clamps entries to kThetaFloor and renormalizes.
pop::ActionDistribution floor_theta(std::span<const double> theta);

/// Encoder plus the next-observation head and the population head.
///
/// The encoder and both heads share one optimizer; the flat parameter order
/// is [encoder | observation head | theta head].
class EncoderDecoder {
 public:
  EncoderDecoder(LatentDims dims, std::mt19937_64& init_rng, nn::AdamConfig adam = {},
                 double clip_norm = 5.0);

  const LatentDims& dims() const { return dims_; }

  std::vector<double> encoder_features(const EncoderInput& input) const;
  LatentEmbedding encode(const EncoderInput& input) const;
  DecoderOutput decode(const LatentEmbedding& z) const;

  /// Draws one configuration per step from the multinomial under the
  /// floored theta head, sized to that step's rectified population.
  std::vector<pop::Configuration> sample_kl_configurations(const EdBatch& batch,
                                                           std::mt19937_64& rng) const;

  EdLossBreakdown loss(const EdBatch& batch, bool include_kl, std::mt19937_64& rng) const;
  EdLossBreakdown loss_with_samples(const EdBatch& batch,
                                    std::span<const pop::Configuration> samples,
                                    bool include_kl) const;

  /// Exact gradient of loss_with_samples with the samples held constant.
  std::vector<double> loss_gradient(const EdBatch& batch,
                                    std::span<const pop::Configuration> samples,
                                    bool include_kl, EdLossBreakdown* value = nullptr) const;

  /// One clipped optimizer step on a freshly sampled loss. Returns the loss
  /// before the step. Throws NonFiniteError and leaves parameters untouched
  /// if the loss or gradient is not finite.
  EdLossBreakdown train_step(const EdBatch& batch, bool include_kl, std::mt19937_64& rng);

  /// Sample from Dir(scale * theta_head(z)); the deterministic overload
  /// returns the theta head itself.
  pop::ActionDistribution predict_next_population(const LatentEmbedding& z, double scale,
                                                  std::mt19937_64& rng) const;
  pop::ActionDistribution predict_next_population(const LatentEmbedding& z) const;

  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> params);
  std::size_t parameter_count() const;
  std::uint64_t parameter_hash() const;

  nn::Mlp& encoder() { return encoder_; }
  nn::Mlp& obs_head() { return obs_head_; }
  nn::Mlp& theta_head() { return theta_head_; }
  const nn::Mlp& encoder() const { return encoder_; }
  const nn::Mlp& obs_head() const { return obs_head_; }
  const nn::Mlp& theta_head() const { return theta_head_; }
  nn::AdamState& optimizer() { return adam_; }

 private:
  EdLossBreakdown evaluate(const EdBatch& batch, std::span<const pop::Configuration> samples,
                           bool include_kl, std::vector<double>* grad) const;
  void check_batch(const EdBatch& batch) const;

  LatentDims dims_;
  nn::Mlp encoder_;
  nn::Mlp obs_head_;
  nn::Mlp theta_head_;
  nn::AdamState adam_;
  double clip_norm_;
};

}  // namespace lia2c::latent
