#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lia2c::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment optimizer state for one parameter vector.
struct AdamState {
  AdamState() = default;
  AdamState(std::size_t parameter_count, AdamConfig cfg)
      : first_moment(parameter_count, 0.0), second_moment(parameter_count, 0.0), config(cfg) {}

  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
  AdamConfig config;
};

/// One bias-corrected Adam update of `params` in place.
///
/// Throws NonFiniteError naming the first offending index if any gradient
/// entry is NaN or infinite; nothing is modified in that case.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

}  // namespace lia2c::nn
