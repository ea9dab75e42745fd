#include "lia2c/population/rectify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lia2c/error.hpp"

namespace lia2c::pop {

std::vector<int> largest_remainder_round(const std::vector<double>& values, int total) {
  std::vector<int> out(values.size());
  std::vector<double> remainders(values.size());
  int assigned = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<int>(std::floor(values[i]));
    remainders[i] = values[i] - out[i];
    assigned += out[i];
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % order.size()) {
    ++out[order[i]];
    ++assigned;
  }
  return out;
}

Configuration rectify_observation(const PrivateObservation& obs, std::size_t action_count) {
  const auto& observed = obs.observed_counts;
  if (observed.action_count() != action_count) {
    throw DimensionError("rectify_observation: observed counts have the wrong length");
  }
  const double delta = obs.noise_rate;
  if (!(delta >= 0.0) || !(delta < 1.0)) {
    throw RectificationUndefinedError("noise rate must lie in [0, 1)");
  }
  if (delta == 0.0 || action_count < 2) return observed;

  const double others = static_cast<double>(action_count - 1);
  const double coefficient = 1.0 - delta - delta / others;
  if (coefficient <= 0.0) {
    throw RectificationUndefinedError("noise rate too high to invert the misreport model");
  }
  const int n = observed.population_size();
  if (n == 0) return observed;

  const double offset = delta * n / others;
  std::vector<double> estimate(action_count);
  double sum = 0.0;
  for (std::size_t a = 0; a < action_count; ++a) {
    estimate[a] = std::max(0.0, (observed.counts[a] - offset) / coefficient);
    sum += estimate[a];
  }
  for (double& e : estimate) e *= n / sum;
  return Configuration(largest_remainder_round(estimate, n));
}

}  // namespace lia2c::pop
