#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lia2c/harness/config.hpp"
#include "lia2c/harness/metrics.hpp"
#include "lia2c/harness/snapshot.hpp"

namespace lia2c::harness {

/// Latent embedding and population prediction of the tracked learner at one tick.
struct EmbeddingRow {
  std::int64_t step = 0;
  int episode = 0;
  std::vector<double> z;
  std::vector<double> theta;
};

struct RunOptions {
  /// Per-seed output directory; empty writes nothing to disk.
  std::string out_dir;
  bool capture_embeddings = false;
  /// Learner whose embeddings are captured (index into the initial roster).
  int embedding_learner = 0;
  std::function<void(const MetricsRecord&)> on_episode;
};

struct RunArtifacts {
  std::uint64_t seed = 0;
  std::vector<MetricsRecord> metrics;
  PolicySnapshot final_snapshot;
  std::vector<EmbeddingRow> embeddings;
  bool aborted = false;
  std::string error;
};

/// One seeded training run. Component failures stop the run and are
/// reported through `aborted`/`error`; the metrics gathered so far are kept.
RunArtifacts run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                          const RunOptions& options = {});

/// Runs every configured seed in turn, each under `<out_dir>/seed_<seed>`.
std::vector<RunArtifacts> run_all(const ExperimentConfig& cfg, const std::string& out_dir);

struct EvalSummary {
  int episodes = 0;
  double mean_return = 0.0;
  double std_return = 0.0;  // across episodes
  std::vector<double> returns;                    // per-episode mean over agents
  std::vector<std::vector<int>> roster_trajectory;  // roster size per tick, per episode
};

/// Runs the snapshot's actors without learning. Hired employees in open mode
/// use the first employee policy in the snapshot. Throws std::invalid_argument
/// when the snapshot does not fit the environment.
EvalSummary evaluate(const PolicySnapshot& snapshot, const org::OrgConfig& env, int episodes,
                     std::uint64_t seed, bool greedy = false);

void export_embeddings(const std::vector<EmbeddingRow>& rows, const std::string& path);
std::vector<EmbeddingRow> read_embeddings(const std::string& path);

}  // namespace lia2c::harness
