#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lia2c/agents/agent.hpp"
#include "lia2c/org/org.hpp"

namespace lia2c::harness {

/// Raw `key = value` pairs. Blank lines and `#` comments are skipped.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues load_key_values(const std::string& path);

enum class EncoderThetaSource { kDecoder, kConjugate };

struct ExperimentConfig {
  org::OrgConfig env;
  agents::Variant variant = agents::Variant::kLia2c;
  std::int64_t total_steps = 200000;
  int episodes_per_eval = 100;
  std::vector<std::uint64_t> seeds = {1};

  double gamma = 0.9;
  double entropy_weight = 0.01;
  double clip_norm = 5.0;
  nn::AdamConfig actor_adam;
  nn::AdamConfig critic_adam;
  nn::AdamConfig ed_adam;
  std::vector<std::size_t> hidden = {64, 64};
  std::size_t latent_dim = 16;
  /// Misreport rate assumed during rectification; negative means env delta.
  double assumed_delta = -1.0;
  EncoderThetaSource encoder_theta = EncoderThetaSource::kDecoder;

  int snapshot_every = 0;  // episodes; 0 keeps only the final snapshot
  int smoothing_window = 100;
  bool write_embeddings = false;
  bool write_trace = false;

  double effective_assumed_delta() const { return assumed_delta < 0.0 ? env.delta : assumed_delta; }
  int episode_budget() const;
  void validate() const;
};

/// Unknown keys and malformed values raise ConfigError.
ExperimentConfig experiment_from(const KeyValues& kv);
ExperimentConfig load_experiment(const std::string& path);
KeyValues to_key_values(const ExperimentConfig& cfg);
void write_experiment(std::ostream& out, const ExperimentConfig& cfg);

/// Agent configuration for one role under this experiment.
agents::AgentConfig agent_config(const ExperimentConfig& cfg, org::Role role);

}  // namespace lia2c::harness
