#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lia2c/harness/metrics.hpp"
#include "lia2c/population/types.hpp"

namespace lia2c::harness {

/// Index of the largest entry; ties go to the lowest index.
int argmax(std::span<const double> v);
/// Most frequent action in a configuration; ties go to the lowest index.
int modal_action(const pop::Configuration& c);

/// Decoder outputs at one step next to what actually happened one step later.
struct PredictionSample {
  std::vector<double> theta_prediction;
  std::vector<double> obs_prediction;  // empty when the model has no observation head
  pop::Configuration true_next;        // true action counts of the others
  int next_obs = 0;
};

struct AccuracyCounts {
  std::int64_t action_hits = 0;
  std::int64_t action_total = 0;
  std::int64_t obs_hits = 0;
  std::int64_t obs_total = 0;

  void add(const PredictionSample& s);
  double action_accuracy() const;
  double obs_accuracy() const;
};

AccuracyCounts count_accuracy(std::span<const PredictionSample> samples);

struct AccuracyWindow {
  int first_episode = 0;
  int last_episode = 0;
  double action_acc = 0.0;
  double obs_acc = 0.0;
  std::int64_t action_total = 0;
  std::int64_t obs_total = 0;
};

/// Pools the per-episode hit counts over consecutive windows of episodes.
std::vector<AccuracyWindow> prediction_accuracy(const std::vector<MetricsRecord>& records,
                                                int window_episodes);

/// Entry i is the mean of values[max(0, i - window + 1) .. i].
std::vector<double> trailing_mean(std::span<const double> values, int window);

std::vector<double> episode_returns(const std::vector<MetricsRecord>& records);

/// Step count at the first episode whose trailing mean return reaches
/// `threshold`.
std::optional<std::int64_t> steps_to_threshold(const std::vector<MetricsRecord>& records,
                                               double threshold, int window);

/// Trailing mean return at the last episode.
double final_smoothed_return(const std::vector<MetricsRecord>& records, int window);

/// Mean return over consecutive blocks of `episodes_per_eval` episodes
/// (a trailing partial block is dropped).
std::vector<double> checkpoint_means(const std::vector<MetricsRecord>& records,
                                     int episodes_per_eval);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> values);
double mean(std::span<const double> values);
double median(std::vector<double> values);

/// Standard deviation across seeds at each checkpoint index shared by all
/// seeds.
std::vector<double> cross_seed_std(const std::vector<std::vector<double>>& per_seed);

}  // namespace lia2c::harness
