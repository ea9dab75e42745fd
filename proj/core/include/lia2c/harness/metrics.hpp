#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace lia2c::harness {

/// One row per training episode.
struct MetricsRecord {
  std::int64_t step = 0;  // environment ticks completed, cumulative
  int episode = 0;
  std::uint64_t seed = 0;
  double mean_return = 0.0;     // mean episode return over every learner that acted
  double manager_return = 0.0;  // 0 outside open mode
  int roster_size = 0;          // at the end of the episode
  double mean_employees = 0.0;  // employee count averaged over ticks
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double ed_loss = 0.0;
  std::int64_t action_hits = 0;
  std::int64_t action_total = 0;
  std::int64_t obs_hits = 0;
  std::int64_t obs_total = 0;
  std::vector<double> returns;  // per learner, in roster order of first appearance

  double action_accuracy() const;
  double obs_accuracy() const;
};

/// Fixed CSV header; `returns` is a ';'-separated list in the last column.
const std::string& metrics_header();
std::string metrics_row(const MetricsRecord& r);

/// Appends rows and flushes after each one, so a crash leaves a parseable
/// prefix.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void append(const MetricsRecord& r);

 private:
  std::ofstream out_;
};

/// Parses every complete row; a trailing partial line is ignored.
std::vector<MetricsRecord> read_metrics(std::istream& in);
std::vector<MetricsRecord> read_metrics(const std::string& path);

}  // namespace lia2c::harness
