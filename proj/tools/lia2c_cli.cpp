// lia2c: train, evaluate and inspect decentralized actor-critic learners on
// the Org environments.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime abort.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lia2c/error.hpp"
#include "lia2c/harness/analysis.hpp"
#include "lia2c/harness/config.hpp"
#include "lia2c/harness/experiment.hpp"
#include "lia2c/oracles/org_chain.hpp"

namespace fs = std::filesystem;
using namespace lia2c;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeAbort = 2;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string variant;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool need_config) {
  auto* c = cmd->add_option("--config", o.config, "key = value experiment file");
  if (need_config) c->required();
  cmd->add_option("--seed", o.seed, "run this seed only");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--variant", o.variant, "lia2c, lia2c-wokld or ia2cdm")
      ->check(CLI::IsMember({"lia2c", "lia2c-wokld", "ia2cdm"}));
}

harness::ExperimentConfig resolve(const CommonOptions& o) {
  harness::KeyValues kv;
  if (!o.config.empty()) kv = harness::load_key_values(o.config);
  if (!o.variant.empty()) kv["variant"] = o.variant;
  if (o.seed) kv["seeds"] = std::to_string(*o.seed);
  return harness::experiment_from(kv);
}

nlohmann::json policy_json(const oracles::ObsPolicy& p) {
  nlohmann::json j;
  const char* names[] = {"meager", "several", "many"};
  for (int o = 0; o < 3; ++o) {
    j[names[o]] = {{"self", p[o][0]}, {"balance", p[o][1]}, {"group", p[o][2]}};
  }
  return j;
}

int cmd_train(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const std::string out = o.out.empty() ? "runs" : o.out;
  int status = kOk;
  for (std::uint64_t seed : cfg.seeds) {
    harness::RunOptions opts;
    opts.out_dir = (fs::path(out) / ("seed_" + std::to_string(seed))).string();
    opts.capture_embeddings = cfg.write_embeddings;
    const auto art = harness::run_training(cfg, seed, opts);
    if (art.aborted) {
      std::cerr << "seed " << seed << " aborted: " << art.error << '\n';
      status = kRuntimeAbort;
      continue;
    }
    std::cout << "seed " << seed << ": " << art.metrics.size() << " episodes, final smoothed return "
              << harness::final_smoothed_return(art.metrics, cfg.smoothing_window) << '\n';
  }
  return status;
}

int cmd_eval(const CommonOptions& o, const std::string& snapshot_path, int episodes, bool greedy) {
  const auto cfg = resolve(o);
  const auto snap = harness::load_snapshot(snapshot_path);
  const std::uint64_t seed = o.seed.value_or(cfg.seeds.front());
  const auto summary = harness::evaluate(snap, cfg.env, episodes, seed, greedy);
  nlohmann::json j = {{"episodes", summary.episodes},
                      {"mean_return", summary.mean_return},
                      {"std_return", summary.std_return},
                      {"returns", summary.returns},
                      {"roster_trajectory", summary.roster_trajectory}};
  if (o.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    fs::create_directories(o.out);
    std::ofstream(fs::path(o.out) / "eval.json") << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_predict_acc(const CommonOptions& o, const std::string& run_dir, int window) {
  const auto records = harness::read_metrics((fs::path(run_dir) / "metrics.csv").string());
  if (window <= 0) {
    window = o.config.empty() ? 100 : resolve(o).episodes_per_eval;
  }
  std::ostringstream csv;
  csv << "first_episode,last_episode,action_acc,obs_acc,action_total,obs_total\n";
  for (const auto& w : harness::prediction_accuracy(records, window)) {
    csv << w.first_episode << ',' << w.last_episode << ',' << w.action_acc << ',' << w.obs_acc
        << ',' << w.action_total << ',' << w.obs_total << '\n';
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    fs::create_directories(o.out);
    std::ofstream(fs::path(o.out) / "prediction_accuracy.csv") << csv.str();
  }
  return kOk;
}

int cmd_export_embeddings(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const std::string out = o.out.empty() ? "." : o.out;
  fs::create_directories(out);
  int status = kOk;
  for (std::uint64_t seed : cfg.seeds) {
    harness::RunOptions opts;
    opts.capture_embeddings = true;
    const auto art = harness::run_training(cfg, seed, opts);
    if (art.aborted) {
      std::cerr << "seed " << seed << " aborted: " << art.error << '\n';
      status = kRuntimeAbort;
    }
    const auto path = fs::path(out) / ("embeddings_seed_" + std::to_string(seed) + ".csv");
    harness::export_embeddings(art.embeddings, path.string());
    std::cout << path.string() << ": " << art.embeddings.size() << " rows\n";
  }
  return status;
}

int cmd_derive_oracle(const CommonOptions& o, int resolution, int max_employees) {
  const auto cfg = resolve(o);
  const auto& env = cfg.env;
  nlohmann::json j;
  j["horizon"] = env.horizon;
  if (!env.open_mode) {
    const int n = env.n_employees;
    const auto best = oracles::optimal_symmetric_policy(env.rewards, n, env.horizon, resolution);
    j["n_employees"] = n;
    j["optimal_return"] = best.value;
    j["optimal_policy"] = policy_json(best.policy);
    j["threshold_90"] = 0.9 * best.value;
    j["all_self_return"] =
        oracles::expected_return(env.rewards, n, env.horizon, oracles::constant_policy(1, 0, 0));
    j["all_group_return"] =
        oracles::expected_return(env.rewards, n, env.horizon, oracles::constant_policy(0, 0, 1));
    j["uniform_return"] = oracles::expected_return(
        env.rewards, n, env.horizon, oracles::constant_policy(1.0 / 3, 1.0 / 3, 1.0 / 3));
  } else {
    const auto staffing = oracles::optimal_staffing(env.rewards, env.horizon, max_employees);
    j["optimal_employees"] = staffing.employees;
    j["staffing_returns"] = staffing.returns;
  }
  const std::string text = j.dump(2);
  if (o.out.empty()) {
    std::cout << text << '\n';
  } else {
    fs::create_directories(o.out);
    std::ofstream(fs::path(o.out) / "oracle.json") << text << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized latent actor-critic experiments on the Org environments"};
  app.require_subcommand(1);

  CommonOptions train_o, eval_o, acc_o, emb_o, oracle_o;
  std::string snapshot;
  std::string run_dir;
  int episodes = 100;
  int window = 0;
  bool greedy = false;
  int resolution = 10;
  int max_employees = 10;

  auto* train = app.add_subcommand("train", "train every configured seed");
  add_common(train, train_o, true);

  auto* eval = app.add_subcommand("eval", "evaluate a policy snapshot without learning");
  add_common(eval, eval_o, false);
  eval->add_option("--snapshot", snapshot, "policy snapshot file")->required();
  eval->add_option("--episodes", episodes, "number of episodes")->check(CLI::NonNegativeNumber);
  eval->add_flag("--greedy", greedy, "take the most probable action");

  auto* acc = app.add_subcommand("predict-acc", "windowed decoder prediction accuracy of a run");
  add_common(acc, acc_o, false);
  acc->add_option("--run", run_dir, "run directory holding metrics.csv")->required();
  acc->add_option("--window", window, "episodes per window (default episodes_per_eval)");

  auto* emb = app.add_subcommand("export-embeddings", "re-run seeds and write latent embeddings");
  add_common(emb, emb_o, true);

  auto* oracle = app.add_subcommand("derive-oracle", "write exact expected-value fixtures");
  add_common(oracle, oracle_o, false);
  oracle->add_option("--resolution", resolution, "policy grid resolution")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--max-employees", max_employees, "largest staffing level tried")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*train) return cmd_train(train_o);
    if (*eval) return cmd_eval(eval_o, snapshot, episodes, greedy);
    if (*acc) return cmd_predict_acc(acc_o, run_dir, window);
    if (*emb) return cmd_export_embeddings(emb_o);
    if (*oracle) return cmd_derive_oracle(oracle_o, resolution, max_employees);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeAbort;
  }
  return kOk;
}
