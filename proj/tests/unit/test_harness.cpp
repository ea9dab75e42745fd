#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lia2c/agents/actor_critic.hpp"
#include "lia2c/error.hpp"
#include "lia2c/harness/analysis.hpp"
#include "lia2c/harness/config.hpp"
#include "lia2c/harness/experiment.hpp"
#include "lia2c/harness/metrics.hpp"
#include "lia2c/harness/seeds.hpp"
#include "lia2c/harness/snapshot.hpp"
#include "lia2c/oracles/org_chain.hpp"

namespace fs = std::filesystem;
using namespace lia2c;
using namespace lia2c::harness;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("lia2c_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig tiny(agents::Variant v = agents::Variant::kLia2c) {
  ExperimentConfig c;
  c.variant = v;
  c.env.n_employees = 3;
  c.env.horizon = 10;
  c.total_steps = 300;
  c.hidden = {8, 8};
  c.latent_dim = 4;
  c.episodes_per_eval = 10;
  c.smoothing_window = 5;
  return c;
}

nn::Mlp constant_actor(std::size_t actions, std::vector<double> bias) {
  nn::Mlp m({3, 4, actions}, nn::Activation::kTanh, nn::Head::kSoftmax);
  std::vector<double> p(m.parameters().size(), 0.0);
  std::copy(bias.begin(), bias.end(), p.end() - static_cast<std::ptrdiff_t>(bias.size()));
  m.set_parameters(p);
  return m;
}

PolicySnapshot closed_snapshot(int n, std::vector<double> bias) {
  PolicySnapshot s;
  for (int i = 0; i < n; ++i) s.entries.push_back({i, org::Role::kEmployee, constant_actor(3, bias)});
  return s;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ParsesKeyValuesWithComments) {
  std::istringstream in("# comment\nn_employees = 7\n\nvariant = ia2cdm  # trailing\nseeds = 1,2,3\n");
  const auto cfg = experiment_from(parse_key_values(in));
  EXPECT_EQ(cfg.env.n_employees, 7);
  EXPECT_EQ(cfg.variant, agents::Variant::kIa2cdm);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(Config, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return experiment_from(parse_key_values(in));
  };
  EXPECT_THROW(parse("n_employees = 3\nn_employees = 4\n"), ConfigError);
  EXPECT_THROW(parse("no_such_key = 1\n"), ConfigError);
  EXPECT_THROW(parse("horizon = ten\n"), ConfigError);
  EXPECT_THROW(parse("variant = ppo\n"), ConfigError);
  EXPECT_THROW(parse("delta = 1.5\n").validate(), ConfigError);
  EXPECT_THROW(parse("just words\n"), ConfigError);
}

TEST(Config, RoundTripsThroughText) {
  auto cfg = tiny(agents::Variant::kLia2cWokld);
  cfg.env.open_mode = true;
  cfg.env.rewards.level_multipliers = {0, 1, 2, 3, 4};
  cfg.seeds = {4, 9};
  std::stringstream ss;
  write_experiment(ss, cfg);
  const auto back = experiment_from(parse_key_values(ss));
  EXPECT_EQ(to_key_values(back), to_key_values(cfg));
}

TEST(Config, AgentDimensionsFollowRole) {
  auto cfg = tiny();
  cfg.env.open_mode = true;
  const auto m = agent_config(cfg, org::Role::kManager);
  EXPECT_EQ(m.dims.self_actions, 5u);
  EXPECT_EQ(m.dims.population_actions, 4u);
  EXPECT_EQ(agent_config(cfg, org::Role::kEmployee).dims.self_actions, 4u);
  EXPECT_DOUBLE_EQ(m.assumed_delta, cfg.env.delta);
}

TEST(Seeds, StreamsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master = 1; master <= 5; ++master) {
    for (auto s : {Stream::kEnv, Stream::kInit, Stream::kPolicy, Stream::kLatent, Stream::kNoise}) {
      for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(master, s, i));
    }
  }
  EXPECT_EQ(seen.size(), 5u * 5u * 50u);
  EXPECT_EQ(derive_seed(3, Stream::kEnv, 2), derive_seed(3, Stream::kEnv, 2));
}

TEST(Metrics, RoundTripAndPartialLine) {
  MetricsRecord r;
  r.step = 500;
  r.episode = 9;
  r.seed = 3;
  r.mean_return = 0.1 + 0.2;
  r.action_hits = 4;
  r.action_total = 7;
  r.returns = {1.5, -2.25};
  std::stringstream ss;
  ss << metrics_header() << '\n' << metrics_row(r) << '\n' << metrics_row(r).substr(0, 10);
  const auto back = read_metrics(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].mean_return, r.mean_return);
  EXPECT_EQ(back[0].returns, r.returns);
  EXPECT_EQ(back[0].step, 500);
  EXPECT_DOUBLE_EQ(back[0].action_accuracy(), 4.0 / 7.0);
  std::istringstream bad("nonsense\n");
  EXPECT_THROW(read_metrics(bad), std::runtime_error);
}

TEST(Snapshot, RoundTripPreservesHash) {
  std::mt19937_64 rng(1);
  PolicySnapshot s;
  s.open_mode = true;
  nn::Mlp m({3, 8, 5}, nn::Activation::kTanh, nn::Head::kSoftmax);
  m.initialize(rng);
  nn::Mlp e({3, 8, 4}, nn::Activation::kTanh, nn::Head::kSoftmax);
  e.initialize(rng);
  s.entries = {{0, org::Role::kManager, m}, {1, org::Role::kEmployee, e}};
  std::stringstream ss;
  write_snapshot(ss, s);
  const auto back = read_snapshot(ss);
  EXPECT_EQ(back.hash(), s.hash());
  EXPECT_TRUE(back.open_mode);
  EXPECT_EQ(back.first_with_role(org::Role::kEmployee)->id, 1);
  std::string bytes = ss.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_ANY_THROW(read_snapshot(truncated));
}

TEST(Training, SameSeedIsBitIdentical) {
  const auto dir = scratch("determinism");
  const auto cfg = tiny();
  RunOptions a, b;
  a.out_dir = (dir / "a").string();
  b.out_dir = (dir / "b").string();
  const auto ra = run_training(cfg, 7, a);
  const auto rb = run_training(cfg, 7, b);
  ASSERT_FALSE(ra.aborted) << ra.error;
  EXPECT_EQ(read_file(dir / "a" / "metrics.csv"), read_file(dir / "b" / "metrics.csv"));
  EXPECT_EQ(ra.final_snapshot.hash(), rb.final_snapshot.hash());
  EXPECT_EQ(ra.metrics.size(), 30u);
  EXPECT_EQ(ra.metrics.back().step, 300);
  EXPECT_TRUE(fs::exists(dir / "a" / "config.txt"));
  EXPECT_TRUE(fs::exists(dir / "a" / "snapshot_final.bin"));
  const auto rc = run_training(cfg, 8);
  EXPECT_NE(rc.final_snapshot.hash(), ra.final_snapshot.hash());
  fs::remove_all(dir);
}

TEST(Training, ZeroLearningRatesFreezePolicies) {
  auto cfg = tiny(agents::Variant::kIa2cdm);
  cfg.actor_adam.learning_rate = 0.0;
  cfg.critic_adam.learning_rate = 0.0;
  const auto r = run_training(cfg, 3);
  ASSERT_FALSE(r.aborted);
  auto first = cfg;
  first.total_steps = cfg.env.horizon;
  EXPECT_EQ(run_training(first, 3).final_snapshot.hash(), r.final_snapshot.hash());
}

TEST(Training, OpenModeRuns) {
  auto cfg = tiny();
  cfg.env.open_mode = true;
  cfg.total_steps = 400;
  const auto r = run_training(cfg, 5);
  ASSERT_FALSE(r.aborted) << r.error;
  for (const auto& m : r.metrics) {
    EXPECT_GE(m.roster_size, 1);
    EXPECT_GE(m.mean_employees, 0.0);
  }
  EXPECT_NE(r.final_snapshot.first_with_role(org::Role::kManager), nullptr);
}

TEST(Training, AccuracyCountsRecorded) {
  for (auto v : {agents::Variant::kLia2c, agents::Variant::kIa2cdm}) {
    const auto r = run_training(tiny(v), 2);
    ASSERT_FALSE(r.aborted);
    const auto& m = r.metrics.front();
    // Three learners, nine counted predictions each (the last tick is excluded).
    EXPECT_EQ(m.action_total, 27);
    EXPECT_EQ(m.obs_total, v == agents::Variant::kIa2cdm ? 0 : 27);
  }
}

TEST(Evaluate, UniformPolicyMatchesExactChain) {
  org::OrgConfig env;
  env.n_employees = 3;
  env.horizon = 12;
  env.delta = 0.0;
  const auto s = evaluate(closed_snapshot(3, {0, 0, 0}), env, 4000, 11);
  const double exact = oracles::expected_return(env.rewards, 3, 12,
                                                oracles::constant_policy(1.0 / 3, 1.0 / 3, 1.0 / 3));
  // Per-episode values average three agents, so the episode-level spread is
  // the right yardstick.
  EXPECT_NEAR(s.mean_return, exact, 3.0 * s.std_return / std::sqrt(4000.0));
}

TEST(Evaluate, AllGroupIsExact) {
  org::OrgConfig env;
  const auto s = evaluate(closed_snapshot(5, {0, 0, 60}), env, 5, 1, true);
  for (double r : s.returns) EXPECT_DOUBLE_EQ(r, 98.5);
  EXPECT_EQ(evaluate(closed_snapshot(5, {0, 0, 60}), env, 0, 1).episodes, 0);
}

TEST(Evaluate, RejectsIncompatibleSnapshot) {
  org::OrgConfig env;
  EXPECT_THROW(evaluate(closed_snapshot(3, {0, 0, 0}), env, 1, 1), std::invalid_argument);
  env.open_mode = true;
  EXPECT_THROW(evaluate(closed_snapshot(5, {0, 0, 0}), env, 1, 1), std::invalid_argument);
}

TEST(Evaluate, OpenModeRosterTrajectory) {
  org::OrgConfig env;
  env.open_mode = true;
  env.horizon = 6;
  PolicySnapshot s;
  s.open_mode = true;
  // Manager always hires; employees always play group.
  s.entries = {{0, org::Role::kManager, constant_actor(5, {0, 0, 0, 60, 0})},
               {1, org::Role::kEmployee, constant_actor(4, {0, 0, 60, 0})}};
  const auto out = evaluate(s, env, 1, 1, true);
  EXPECT_EQ(out.roster_trajectory[0], (std::vector<int>{2, 3, 4, 5, 6, 7}));
}

TEST(Accuracy, ArgmaxAndModeTiesGoLow) {
  const std::vector<double> v = {0.4, 0.4, 0.2};
  EXPECT_EQ(argmax(v), 0);
  EXPECT_EQ(modal_action(pop::Configuration({1, 2, 2})), 1);
}

TEST(Accuracy, PerfectAndChancePredictors) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<PredictionSample> perfect, chance;
  for (int i = 0; i < 6000; ++i) {
    std::vector<int> counts(3, 0);
    counts[static_cast<std::size_t>(pick(rng))] = 4;
    const int mode = modal_action(pop::Configuration(counts));
    const int next_obs = pick(rng);
    std::vector<double> t(3, 0.1), o(3, 0.1);
    t[static_cast<std::size_t>(mode)] = 0.8;
    o[static_cast<std::size_t>(next_obs)] = 0.8;
    perfect.push_back({t, o, pop::Configuration(counts), next_obs});
    std::vector<double> rt(3, 0.1), ro(3, 0.1);
    rt[static_cast<std::size_t>(pick(rng))] = 0.8;
    ro[static_cast<std::size_t>(pick(rng))] = 0.8;
    chance.push_back({rt, ro, pop::Configuration(counts), next_obs});
  }
  const auto p = count_accuracy(perfect);
  EXPECT_EQ(p.action_accuracy(), 1.0);
  EXPECT_EQ(p.obs_accuracy(), 1.0);
  const auto c = count_accuracy(chance);
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / 6000.0);
  EXPECT_NEAR(c.action_accuracy(), 1.0 / 3, 3.0 * se);
  EXPECT_NEAR(c.obs_accuracy(), 1.0 / 3, 3.0 * se);
}

TEST(Accuracy, HandLabeledSequence) {
  // 20 steps: action correct on every step divisible by 3 or 4, obs correct
  // on even steps; two steps have no other members and no obs head.
  std::vector<PredictionSample> s;
  int action_hits = 0, obs_hits = 0;
  for (int i = 0; i < 20; ++i) {
    const bool a_ok = i % 3 == 0 || i % 4 == 0;
    const bool o_ok = i % 2 == 0;
    PredictionSample p;
    p.true_next = pop::Configuration({0, 3, 1});
    p.theta_prediction = a_ok ? std::vector<double>{0.2, 0.7, 0.1} : std::vector<double>{0.2, 0.1, 0.7};
    p.next_obs = 2;
    p.obs_prediction = o_ok ? std::vector<double>{0, 0, 1} : std::vector<double>{1, 0, 0};
    if (i >= 18) {
      p.true_next = pop::Configuration({0, 0, 0});
      p.obs_prediction.clear();
    } else {
      action_hits += a_ok;
      obs_hits += o_ok;
    }
    s.push_back(p);
  }
  const auto c = count_accuracy(s);
  EXPECT_EQ(c.action_total, 18);
  EXPECT_EQ(c.obs_total, 18);
  EXPECT_EQ(c.action_hits, action_hits);
  EXPECT_EQ(c.obs_hits, obs_hits);
  EXPECT_EQ(action_hits, 9);
  EXPECT_EQ(obs_hits, 9);
}

TEST(Accuracy, WindowsPoolCounts) {
  std::vector<MetricsRecord> recs(5);
  for (int i = 0; i < 5; ++i) {
    recs[i].episode = i;
    recs[i].action_hits = i;
    recs[i].action_total = 4;
  }
  const auto w = prediction_accuracy(recs, 2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_DOUBLE_EQ(w[0].action_acc, 1.0 / 8);
  EXPECT_DOUBLE_EQ(w[1].action_acc, 5.0 / 8);
  EXPECT_EQ(w[2].action_total, 4);
}

TEST(Analysis, SmoothingAndThresholds) {
  std::vector<MetricsRecord> recs(6);
  const double returns[] = {0, 2, 4, 6, 8, 10};
  for (int i = 0; i < 6; ++i) {
    recs[i].episode = i;
    recs[i].step = 10 * (i + 1);
    recs[i].mean_return = returns[i];
  }
  const auto sm = trailing_mean(episode_returns(recs), 2);
  EXPECT_EQ(sm, (std::vector<double>{0, 1, 3, 5, 7, 9}));
  EXPECT_EQ(steps_to_threshold(recs, 5.0, 2), 40);
  EXPECT_FALSE(steps_to_threshold(recs, 50.0, 2).has_value());
  EXPECT_DOUBLE_EQ(final_smoothed_return(recs, 3), 8.0);
  EXPECT_EQ(checkpoint_means(recs, 4), (std::vector<double>{3.0}));
  EXPECT_DOUBLE_EQ(median({3, 1, 2, 10}), 2.5);
  EXPECT_DOUBLE_EQ(sample_std(std::vector<double>{1, 3}), std::sqrt(2.0));
  const auto cs = cross_seed_std({{1, 2, 3}, {3, 2}});
  EXPECT_EQ(cs.size(), 2u);
  EXPECT_DOUBLE_EQ(cs[1], 0.0);
}

TEST(Embeddings, ShapeAndRoundTrip) {
  const auto dir = scratch("embeddings");
  auto cfg = tiny();
  RunOptions opts;
  opts.capture_embeddings = true;
  const auto r = run_training(cfg, 6, opts);
  ASSERT_FALSE(r.aborted);
  // One row per tick of every episode.
  ASSERT_EQ(r.embeddings.size(), 300u);
  EXPECT_EQ(r.embeddings[0].z.size(), 4u);
  EXPECT_EQ(r.embeddings[0].theta.size(), 3u);
  const auto path = (dir / "e.csv").string();
  export_embeddings(r.embeddings, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, 2 + 4 + 3);
  const auto back = read_embeddings(path);
  ASSERT_EQ(back.size(), r.embeddings.size());
  EXPECT_EQ(back[17].z, r.embeddings[17].z);
  EXPECT_EQ(back[17].theta, r.embeddings[17].theta);
  fs::remove_all(dir);
}

#ifdef LIA2C_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LIA2C_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const auto good = dir / "good.cfg";
  std::ofstream(good) << "n_employees = 2\nhorizon = 5\ntotal_steps = 20\nhidden = 4,4\n"
                         "latent_dim = 2\nseeds = 1\n";
  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "n_employees = -3\n";
  const auto unknown = dir / "unknown.cfg";
  std::ofstream(unknown) << "learning_rate = 1\n";
  const std::string out = (dir / "out").string();

  EXPECT_EQ(run_cli("train --config " + good.string() + " --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "seed_1" / "metrics.csv"));
  EXPECT_EQ(run_cli("train --config " + bad.string() + " --out " + out), 1);
  EXPECT_EQ(run_cli("train --config " + unknown.string()), 1);
  EXPECT_EQ(run_cli("train --config " + good.string() + " --variant nope"), 1);
  EXPECT_EQ(run_cli("train"), 1);
  EXPECT_EQ(run_cli("predict-acc --run " + (dir / "out" / "seed_1").string()), 0);
  EXPECT_EQ(run_cli("eval --config " + good.string() + " --snapshot " +
                    (dir / "out" / "seed_1" / "snapshot_final.bin").string() + " --episodes 3 --out " +
                    out),
            0);
  EXPECT_TRUE(fs::exists(dir / "out" / "eval.json"));
  EXPECT_EQ(run_cli("eval --config " + good.string() + " --snapshot " + (dir / "missing.bin").string()),
            2);
  EXPECT_EQ(run_cli("derive-oracle --config " + good.string() + " --resolution 2"), 0);
  fs::remove_all(dir);
}
#endif
