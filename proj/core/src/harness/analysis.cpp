#include "lia2c/harness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lia2c::harness {

int argmax(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("argmax of an empty vector");
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

int modal_action(const pop::Configuration& c) {
  if (c.counts.empty()) throw std::invalid_argument("modal action of an empty configuration");
  return static_cast<int>(std::max_element(c.counts.begin(), c.counts.end()) - c.counts.begin());
}

void AccuracyCounts::add(const PredictionSample& s) {
  if (s.true_next.population_size() > 0) {
    ++action_total;
    if (argmax(s.theta_prediction) == modal_action(s.true_next)) ++action_hits;
  }
  if (!s.obs_prediction.empty()) {
    ++obs_total;
    if (argmax(s.obs_prediction) == s.next_obs) ++obs_hits;
  }
}

double AccuracyCounts::action_accuracy() const {
  return action_total ? static_cast<double>(action_hits) / static_cast<double>(action_total) : 0.0;
}

double AccuracyCounts::obs_accuracy() const {
  return obs_total ? static_cast<double>(obs_hits) / static_cast<double>(obs_total) : 0.0;
}

AccuracyCounts count_accuracy(std::span<const PredictionSample> samples) {
  AccuracyCounts c;
  for (const auto& s : samples) c.add(s);
  return c;
}

std::vector<AccuracyWindow> prediction_accuracy(const std::vector<MetricsRecord>& records,
                                                int window_episodes) {
  if (window_episodes <= 0) throw std::invalid_argument("window must be positive");
  std::vector<AccuracyWindow> out;
  for (std::size_t start = 0; start < records.size(); start += window_episodes) {
    const std::size_t end = std::min(records.size(), start + window_episodes);
    AccuracyCounts c;
    for (std::size_t i = start; i < end; ++i) {
      c.action_hits += records[i].action_hits;
      c.action_total += records[i].action_total;
      c.obs_hits += records[i].obs_hits;
      c.obs_total += records[i].obs_total;
    }
    out.push_back({records[start].episode, records[end - 1].episode, c.action_accuracy(),
                   c.obs_accuracy(), c.action_total, c.obs_total});
  }
  return out;
}

std::vector<double> trailing_mean(std::span<const double> values, int window) {
  if (window <= 0) throw std::invalid_argument("window must be positive");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, window));
  }
  return out;
}

std::vector<double> episode_returns(const std::vector<MetricsRecord>& records) {
  std::vector<double> r;
  r.reserve(records.size());
  for (const auto& m : records) r.push_back(m.mean_return);
  return r;
}

std::optional<std::int64_t> steps_to_threshold(const std::vector<MetricsRecord>& records,
                                               double threshold, int window) {
  const auto smooth = trailing_mean(episode_returns(records), window);
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    if (smooth[i] >= threshold) return records[i].step;
  }
  return std::nullopt;
}

double final_smoothed_return(const std::vector<MetricsRecord>& records, int window) {
  if (records.empty()) throw std::invalid_argument("no metrics records");
  return trailing_mean(episode_returns(records), window).back();
}

std::vector<double> checkpoint_means(const std::vector<MetricsRecord>& records,
                                     int episodes_per_eval) {
  if (episodes_per_eval <= 0) throw std::invalid_argument("episodes_per_eval must be positive");
  std::vector<double> out;
  const std::size_t w = static_cast<std::size_t>(episodes_per_eval);
  for (std::size_t start = 0; start + w <= records.size(); start += w) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + w; ++i) sum += records[i].mean_return;
    out.push_back(sum / static_cast<double>(w));
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> cross_seed_std(const std::vector<std::vector<double>>& per_seed) {
  if (per_seed.empty()) return {};
  std::size_t len = per_seed.front().size();
  for (const auto& s : per_seed) len = std::min(len, s.size());
  std::vector<double> out(len);
  std::vector<double> column(per_seed.size());
  for (std::size_t c = 0; c < len; ++c) {
    for (std::size_t s = 0; s < per_seed.size(); ++s) column[s] = per_seed[s][c];
    out[c] = sample_std(column);
  }
  return out;
}

}  // namespace lia2c::harness
