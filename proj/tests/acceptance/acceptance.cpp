// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--out DIR] [criterion ...]
//
// With no criterion numbers every check runs. Training artifacts go under
// DIR (default ./acceptance_runs).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lia2c/agents/actor_critic.hpp"
#include "lia2c/harness/analysis.hpp"
#include "lia2c/harness/config.hpp"
#include "lia2c/harness/experiment.hpp"
#include "lia2c/latent/encoder_decoder.hpp"
#include "lia2c/oracles/enumeration.hpp"
#include "lia2c/oracles/numeric.hpp"
#include "lia2c/oracles/org_chain.hpp"
#include "lia2c/population/belief.hpp"
#include "lia2c/population/configuration.hpp"
#include "lia2c/population/dirichlet.hpp"
#include "lia2c/population/rectify.hpp"

namespace fs = std::filesystem;
using namespace lia2c;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kDpTolerance = 1e-12;
constexpr double kDpSeconds = 1.0;
constexpr double kKlRelative = 0.01;
constexpr int kKlSamples = 1'000'000;
constexpr double kKlSelf = 1e-12;
constexpr double kBeliefTolerance = 1e-8;
constexpr double kGradRelative = 1e-4;
constexpr int kGradInstances = 100;
constexpr double kFloorTolerance = 1e-9;
constexpr int kCriticUpdates = 1000;
constexpr double kOptimalFraction = 0.9;
constexpr double kSecondsPerSeed = 15 * 60;
constexpr double kCheckpointShare = 0.7;
constexpr double kWarmupFraction = 0.1;
constexpr int kStaffingSlack = 1;
constexpr double kAboveChance = 0.2;
constexpr int kTailEpisodes = 100;
const std::vector<std::uint64_t> kSeeds = {1, 2, 3, 4, 5};

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> random_simplex(std::size_t k, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> v(k);
  double s = 0.0;
  for (auto& x : v) s += (x = g(rng));
  for (auto& x : v) x /= s;
  return v;
}

// ---- 1 ----------------------------------------------------------------------

void configuration_dp() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> pick_n(1, 6), pick_k(2, 4);
  double worst = 0.0;
  double dp_seconds = 0.0;
  bool support_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = pick_n(rng);
    const auto k = static_cast<std::size_t>(pick_k(rng));
    std::vector<pop::ActionDistribution> agents;
    std::vector<std::vector<double>> raw;
    for (int j = 0; j < n; ++j) {
      raw.push_back(random_simplex(k, rng));
      agents.emplace_back(raw.back());
    }
    const auto t0 = Clock::now();
    const auto dp = pop::config_distribution(agents);
    dp_seconds += seconds_since(t0);
    const auto brute = oracles::joint_config_distribution(raw);
    if (dp.size() != brute.size()) support_ok = false;
    for (const auto& [counts, p] : brute) {
      const auto it = dp.find(pop::Configuration(counts));
      worst = std::max(worst, std::abs((it == dp.end() ? 0.0 : it->second) - p));
    }
  }
  report(1, support_ok && worst <= kDpTolerance && dp_seconds < kDpSeconds,
         fmt("max abs diff %.3g (tol %.0e), DP time %.3f s (limit %.0f s), 100 trials", worst,
             kDpTolerance, dp_seconds, kDpSeconds));
}

// ---- 2 ----------------------------------------------------------------------

void conjugate_update() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> k_dist(2, 5), a_dist(1, 50), c_dist(0, 20);
  int exact = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto k = static_cast<std::size_t>(k_dist(rng));
    std::vector<double> alpha(k);
    std::vector<int> counts(k);
    std::vector<long long> expected(k);
    for (std::size_t j = 0; j < k; ++j) {
      const int a = a_dist(rng);
      alpha[j] = a;
      counts[j] = c_dist(rng);
      expected[j] = static_cast<long long>(a) + counts[j];
    }
    const auto post = pop::posterior_update(pop::DirichletParams(alpha), pop::Configuration(counts));
    bool same = true;
    for (std::size_t j = 0; j < k; ++j) {
      same = same && post.alpha()[j] == static_cast<double>(expected[j]);
    }
    exact += same;
  }
  int identity = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto k = static_cast<std::size_t>(k_dist(rng));
    const auto c = pop::sample_configuration(pop::ActionDistribution(random_simplex(k, rng)),
                                             c_dist(rng), rng);
    identity += pop::rectify_observation({c, 0.0}, k) == c;
  }
  report(2, exact == 1000 && identity == 1000,
         fmt("%d/1000 exact posterior updates, %d/1000 identity rectifications at zero noise",
             exact, identity));
}

// ---- 3 ----------------------------------------------------------------------

void dirichlet_kl() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> k_dist(2, 4);
  std::uniform_real_distribution<double> a_dist(0.5, 6.0);
  double worst_rel = 0.0;
  double min_kl = std::numeric_limits<double>::infinity();
  double worst_self = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const auto k = static_cast<std::size_t>(k_dist(rng));
    std::vector<double> p(k), q(k);
    for (auto& v : p) v = a_dist(rng);
    for (auto& v : q) v = a_dist(rng);
    const double analytic = pop::dirichlet_kl(pop::DirichletParams(p), pop::DirichletParams(q));
    const double mc = oracles::monte_carlo_kl(p, q, kKlSamples, 1000 + pair);
    worst_rel = std::max(worst_rel, std::abs(analytic - mc) / std::abs(mc));
    worst_self = std::max(worst_self, std::abs(pop::dirichlet_kl(pop::DirichletParams(p),
                                                                 pop::DirichletParams(p))));
  }
  for (int i = 0; i < 10000; ++i) {
    const auto k = static_cast<std::size_t>(k_dist(rng));
    std::vector<double> p(k), q(k);
    for (auto& v : p) v = 20.0 * a_dist(rng) / 6.0;
    for (auto& v : q) v = 20.0 * a_dist(rng) / 6.0;
    min_kl = std::min(min_kl, pop::dirichlet_kl(pop::DirichletParams(p), pop::DirichletParams(q)));
  }
  report(3, worst_rel <= kKlRelative && min_kl >= 0.0 && worst_self <= kKlSelf,
         fmt("worst relative gap to Monte Carlo %.4f (tol %.2f) over 20 pairs, min KL %.3g over "
             "10000 pairs, max |KL(a,a)| %.3g",
             worst_rel, kKlRelative, min_kl, worst_self));
}

// ---- 4 ----------------------------------------------------------------------

void belief_update() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t k = 3;
      const int obs = trial % 3;
      pop::ModelBelief belief;
      std::vector<oracles::AgentModels> raw;
      for (int j = 0; j < n; ++j) {
        const double p0 = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        pop::AgentBelief ab;
        ab.probabilities = {p0, 1.0 - p0};
        oracles::AgentModels am;
        for (int m = 0; m < 2; ++m) {
          pop::CandidateModel cm;
          for (std::size_t o = 0; o < 3; ++o) cm.policy.emplace_back(random_simplex(k, rng));
          am.policy.push_back(cm.policy[static_cast<std::size_t>(obs)].theta());
          ab.models.push_back(std::move(cm));
        }
        am.prior = ab.probabilities;
        raw.push_back(am);
        belief.agents.push_back(std::move(ab));
      }
      const double delta = 0.05 + 0.1 * (trial % 4);
      const auto observed = pop::sample_configuration(
          pop::ActionDistribution(random_simplex(k, rng)), n, rng);
      const auto post = pop::belief_update_bu(belief, trial % 3, obs, {observed, delta},
                                              pop::uniform_misreport_w0(delta));
      const auto expected = oracles::joint_model_posterior(raw, k, [&](const oracles::Counts& c) {
        return oracles::joint_misreport_likelihood(c, observed.counts, delta);
      });
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < 2; ++m) {
          worst = std::max(worst, std::abs(post.agents[static_cast<std::size_t>(j)]
                                               .probabilities[static_cast<std::size_t>(m)] -
                                           expected[static_cast<std::size_t>(j)]
                                                   [static_cast<std::size_t>(m)]));
        }
      }
      ++cases;
    }
  }
  report(4, worst <= kBeliefTolerance,
         fmt("max abs diff %.3g (tol %.0e) over %d cases, N = 1..4, 2 models each", worst,
             kBeliefTolerance, cases));
}

// ---- 5 ----------------------------------------------------------------------

// Relative error of Mlp::grad for f = u . net(x) against central differences
// on a random subset of parameters.
double map_gradient_error(nn::Mlp& net, std::mt19937_64& rng, int coords) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(net.input_size()), u(net.output_size());
  for (auto& v : x) v = n(rng);
  for (auto& v : u) v = n(rng);
  net.initialize(rng);
  auto params = std::vector<double>(net.parameters().begin(), net.parameters().end());
  for (auto& p : params) p += 0.05 * n(rng);  // nonzero biases
  net.set_parameters(params);
  const auto grad = net.grad(x, u);
  auto f = [&] {
    const auto y = net.forward(x);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * y(static_cast<Eigen::Index>(i));
    return s;
  };
  std::vector<std::size_t> idx(params.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(coords)));
  std::vector<double> a, fd;
  const double h = 1e-6;
  for (auto i : idx) {
    auto probe = params;
    probe[i] += h;
    net.set_parameters(probe);
    const double up = f();
    probe[i] -= 2 * h;
    net.set_parameters(probe);
    const double down = f();
    fd.push_back((up - down) / (2 * h));
    a.push_back(grad[i]);
  }
  net.set_parameters(params);
  return oracles::relative_error(a, fd);
}

latent::EdBatch random_ed_batch(const latent::LatentDims&, std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> obs(0, 2);
  std::uniform_real_distribution<double> a(1.0, 10.0);
  latent::EdBatch batch;
  for (int t = 0; t < len; ++t) {
    const auto seen = pop::sample_configuration(pop::ActionDistribution(random_simplex(3, rng)), 4, rng);
    std::vector<double> w(3);
    for (std::size_t i = 0; i < 3; ++i) w[i] = seen.counts[i] / 4.0;
    latent::EdStep s;
    s.input = {obs(rng), w, obs(rng), pop::ActionDistribution(random_simplex(3, rng))};
    s.next_public_obs = obs(rng);
    s.rectified = pop::sample_configuration(pop::ActionDistribution(random_simplex(3, rng)), 4, rng);
    s.prior = pop::DirichletParams({a(rng), a(rng), a(rng)});
    batch.push_back(std::move(s));
  }
  return batch;
}

void gradient_fidelity() {
  std::mt19937_64 rng(505);
  const agents::AgentDims dims;
  latent::LatentDims ld;
  std::map<std::string, double> worst;
  std::map<std::string, int> count;
  std::mt19937_64 init(1);
  agents::AgentBundle lia(agents::Variant::kLia2c, dims, {}, init);
  agents::AgentBundle dm(agents::Variant::kIa2cdm, dims, {}, init);
  latent::EncoderDecoder ed(ld, init);
  std::vector<std::pair<std::string, nn::Mlp*>> maps = {
      {"actor", &lia.actor},           {"critic", &lia.critic},
      {"dm-critic", &dm.critic},       {"encoder", &ed.encoder()},
      {"theta-head", &ed.theta_head()}, {"obs-head", &ed.obs_head()}};
  for (auto& [name, net] : maps) {
    for (int i = 0; i < kGradInstances; ++i) {
      worst[name] = std::max(worst[name], map_gradient_error(*net, rng, 64));
      ++count[name];
    }
  }
  for (int i = 0; i < kGradInstances; ++i) {
    latent::EncoderDecoder model(ld, rng);
    const auto batch = random_ed_batch(ld, rng, 5);
    const auto samples = model.sample_kl_configurations(batch, rng);
    const auto params = model.flat_parameters();
    const auto grad = model.loss_gradient(batch, samples, true);
    std::vector<std::size_t> idx(params.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(64);
    std::vector<double> a, fd;
    for (auto j : idx) {
      auto probe = params;
      probe[j] += 1e-5;
      model.set_flat_parameters(probe);
      const double up = model.loss_with_samples(batch, samples, true).total;
      probe[j] -= 2e-5;
      model.set_flat_parameters(probe);
      const double down = model.loss_with_samples(batch, samples, true).total;
      fd.push_back((up - down) / 2e-5);
      a.push_back(grad[j]);
    }
    worst["ed_loss"] = std::max(worst["ed_loss"], oracles::relative_error(a, fd));
    ++count["ed_loss"];
  }
  bool pass = true;
  std::string detail;
  for (const auto& [name, err] : worst) {
    pass = pass && err < kGradRelative && count[name] >= kGradInstances;
    detail += fmt("%s %.2g/%d  ", name.c_str(), err, count[name]);
  }
  report(5, pass, detail + fmt("(worst relative error/instances, tol %.0e)", kGradRelative));
}

// ---- 6 ----------------------------------------------------------------------

void set_constant_head(nn::Mlp& head, const std::vector<double>& bias) {
  std::vector<double> p(head.parameters().size(), 0.0);
  std::copy(bias.begin(), bias.end(), p.end() - static_cast<std::ptrdiff_t>(bias.size()));
  head.set_parameters(p);
}

void loss_floors() {
  std::mt19937_64 rng(606);
  latent::LatentDims ld;
  latent::EncoderDecoder ed(ld, rng);
  double worst_recon = 0.0, worst_kl = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto batch = random_ed_batch(ld, rng, 1);
    auto& s = batch[0];
    s.prior = pop::DirichletParams::uniform(3);
    std::vector<double> target(3, 0.0);
    target[static_cast<std::size_t>(s.next_public_obs)] = 1.0;
    set_constant_head(ed.obs_head(), target);
    const std::vector<pop::Configuration> c = {s.rectified};
    const auto loss = ed.loss_with_samples(batch, c, true);
    worst_recon = std::max(worst_recon, std::abs(loss.reconstruction));
    worst_kl = std::max(worst_kl, std::abs(loss.kl));
  }
  int ordered = 0;
  for (int i = 0; i < 1000; ++i) {
    if (i % 100 == 0) ed = latent::EncoderDecoder(ld, rng);
    const auto batch = random_ed_batch(ld, rng, 3);
    const auto samples = ed.sample_kl_configurations(batch, rng);
    ordered += ed.loss_with_samples(batch, samples, false).total <=
               ed.loss_with_samples(batch, samples, true).total;
  }
  report(6, worst_recon <= kFloorTolerance && worst_kl <= kFloorTolerance && ordered == 1000,
         fmt("matched targets: reconstruction %.2g, KL %.2g (tol %.0e); w/oKLD <= full on "
             "%d/1000",
             worst_recon, worst_kl, kFloorTolerance, ordered));
}

// ---- 7 ----------------------------------------------------------------------

void no_backprop() {
  agents::AgentConfig cfg;
  agents::Agent agent(0, cfg, {7, 8, 9});
  agent.begin_episode(4);
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int t = 0; t < 20; ++t) {
    agent.act(pick(rng));
    agents::StepFeedback fb;
    fb.reward = pick(rng);
    fb.observed_counts = pop::sample_configuration(pop::ActionDistribution::uniform(3), 4, rng);
    fb.next_public_obs = pick(rng);
    fb.done = t == 19;
    fb.next_population_size = 4;
    agent.observe(fb);
  }
  const auto transitions = agent.transitions();
  const auto latent_hash = agent.latent_model()->parameter_hash();
  const auto critic_hash = nn::parameter_hash(agent.bundle().critic.parameters());
  for (int i = 0; i < kCriticUpdates; ++i) agents::critic_update(agent.bundle(), transitions);
  const bool same = agent.latent_model()->parameter_hash() == latent_hash;
  const bool moved = nn::parameter_hash(agent.bundle().critic.parameters()) != critic_hash;
  report(7, same && moved,
         fmt("latent-model hash %s after %d critic updates (critic %s)",
             same ? "unchanged" : "CHANGED", kCriticUpdates, moved ? "moved" : "did not move"));
}

// ---- training-based criteria -------------------------------------------------

harness::ExperimentConfig closed_config(agents::Variant v) {
  harness::ExperimentConfig c;
  c.env.n_employees = 5;
  c.env.delta = 0.1;
  c.env.horizon = 50;
  c.variant = v;
  c.total_steps = 200'000;
  c.episodes_per_eval = 100;
  c.seeds = kSeeds;
  return c;
}

harness::ExperimentConfig open_config() {
  harness::ExperimentConfig c;
  c.env.open_mode = true;
  c.env.delta = 0.1;
  c.env.horizon = 50;
  c.total_steps = 500'000;
  c.episodes_per_eval = 100;
  c.seeds = kSeeds;
  return c;
}

struct SeedRun {
  std::vector<harness::MetricsRecord> metrics;
  double seconds = 0.0;
  bool aborted = false;
  std::string error;
  fs::path dir;
};

class Runs {
 public:
  explicit Runs(fs::path root) : root_(std::move(root)) {}

  const std::vector<SeedRun>& get(const std::string& name, const harness::ExperimentConfig& cfg) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    std::vector<SeedRun> runs;
    for (auto seed : cfg.seeds) runs.push_back(run_one(name, cfg, seed, "seed_"));
    return cache_.emplace(name, std::move(runs)).first->second;
  }

  SeedRun run_one(const std::string& name, const harness::ExperimentConfig& cfg,
                  std::uint64_t seed, const std::string& prefix) {
    SeedRun r;
    r.dir = root_ / name / (prefix + std::to_string(seed));
    fs::remove_all(r.dir);
    harness::RunOptions opts;
    opts.out_dir = r.dir.string();
    const auto t0 = Clock::now();
    auto art = harness::run_training(cfg, seed, opts);
    r.seconds = seconds_since(t0);
    r.metrics = std::move(art.metrics);
    r.aborted = art.aborted;
    r.error = art.error;
    std::printf("  [%s seed %llu] %zu episodes in %.1f s%s\n", name.c_str(),
                static_cast<unsigned long long>(seed), r.metrics.size(), r.seconds,
                r.aborted ? (" ABORTED: " + r.error).c_str() : "");
    std::fflush(stdout);
    return r;
  }

 private:
  fs::path root_;
  std::map<std::string, std::vector<SeedRun>> cache_;
};

double optimal_closed_return(const harness::ExperimentConfig& cfg) {
  return oracles::optimal_symmetric_policy(cfg.env.rewards, cfg.env.n_employees, cfg.env.horizon)
      .value;
}

bool any_aborted(const std::vector<SeedRun>& runs) {
  return std::any_of(runs.begin(), runs.end(), [](const SeedRun& r) { return r.aborted; });
}

void desk_scale_learning(Runs& runs) {
  const auto cfg = closed_config(agents::Variant::kLia2c);
  const double optimum = optimal_closed_return(cfg);
  const auto& lia = runs.get("lia2c", cfg);
  bool pass = !any_aborted(lia);
  double worst_return = std::numeric_limits<double>::infinity();
  double slowest = 0.0;
  std::string per_seed;
  for (const auto& r : lia) {
    const double f = harness::final_smoothed_return(r.metrics, cfg.smoothing_window);
    worst_return = std::min(worst_return, f);
    slowest = std::max(slowest, r.seconds);
    per_seed += fmt("%.2f ", f);
  }
  pass = pass && worst_return >= kOptimalFraction * optimum && slowest < kSecondsPerSeed;
  report(8, pass,
         fmt("final smoothed returns [%s] vs %.0f%% of optimum %.3f = %.3f; slowest seed %.0f s "
             "(limit %.0f s)",
             per_seed.c_str(), 100 * kOptimalFraction, optimum, kOptimalFraction * optimum,
             slowest, kSecondsPerSeed));
}

double median_steps(const std::vector<SeedRun>& runs, double threshold, int window,
                    std::string& detail) {
  std::vector<double> steps;
  for (const auto& r : runs) {
    const auto s = harness::steps_to_threshold(r.metrics, threshold, window);
    steps.push_back(s ? static_cast<double>(*s) : std::numeric_limits<double>::infinity());
    detail += s ? fmt("%lld ", static_cast<long long>(*s)) : std::string("never ");
  }
  return harness::median(steps);
}

void ordering(Runs& runs) {
  const auto base = closed_config(agents::Variant::kLia2c);
  const double threshold = kOptimalFraction * optimal_closed_return(base);
  const auto& lia = runs.get("lia2c", base);
  const auto& wokld = runs.get("lia2c-wokld", closed_config(agents::Variant::kLia2cWokld));
  const auto& dm = runs.get("ia2cdm", closed_config(agents::Variant::kIa2cdm));
  std::string dl, dw, dd;
  const double m_lia = median_steps(lia, threshold, base.smoothing_window, dl);
  const double m_wokld = median_steps(wokld, threshold, base.smoothing_window, dw);
  const double m_dm = median_steps(dm, threshold, base.smoothing_window, dd);
  const bool pass = !any_aborted(lia) && !any_aborted(wokld) && !any_aborted(dm) &&
                    std::isfinite(m_lia) && m_lia <= m_dm && m_wokld >= m_lia;
  report(9, pass,
         fmt("median steps to %.2f: LIA2C %.0f [%s], w/oKLD %.0f [%s], IA2C++DM %.0f [%s]",
             threshold, m_lia, dl.c_str(), m_wokld, dw.c_str(), m_dm, dd.c_str()));
}

void variance(Runs& runs) {
  const auto base = closed_config(agents::Variant::kLia2c);
  const auto& lia = runs.get("lia2c", base);
  const auto& dm = runs.get("ia2cdm", closed_config(agents::Variant::kIa2cdm));
  std::vector<std::vector<double>> cl, cd;
  for (const auto& r : lia) cl.push_back(harness::checkpoint_means(r.metrics, base.episodes_per_eval));
  for (const auto& r : dm) cd.push_back(harness::checkpoint_means(r.metrics, base.episodes_per_eval));
  const auto sl = harness::cross_seed_std(cl);
  const auto sd = harness::cross_seed_std(cd);
  const std::size_t n = std::min(sl.size(), sd.size());
  const auto warmup = static_cast<std::size_t>(std::ceil(kWarmupFraction * static_cast<double>(n)));
  int wins = 0, total = 0;
  double sum_l = 0.0, sum_d = 0.0;
  for (std::size_t i = warmup; i < n; ++i) {
    wins += sl[i] <= sd[i];
    ++total;
    sum_l += sl[i];
    sum_d += sd[i];
  }
  const double share = total > 0 ? static_cast<double>(wins) / total : 0.0;
  report(10, !any_aborted(lia) && !any_aborted(dm) && total > 0 && share >= kCheckpointShare,
         fmt("LIA2C std <= IA2C++DM std at %d/%d checkpoints after warm-up (%.0f%%, need "
             "%.0f%%); mean std %.3f vs %.3f",
             wins, total, 100 * share, 100 * kCheckpointShare, total ? sum_l / total : 0.0,
             total ? sum_d / total : 0.0));
}

void staffing(Runs& runs) {
  const auto cfg = open_config();
  const auto oracle = oracles::optimal_staffing(cfg.env.rewards, cfg.env.horizon, 10);
  const auto& open = runs.get("open", cfg);
  std::vector<double> steady;
  std::string detail;
  for (const auto& r : open) {
    const std::size_t n = r.metrics.size();
    const std::size_t from = n > static_cast<std::size_t>(kTailEpisodes) ? n - kTailEpisodes : 0;
    double s = 0.0;
    for (std::size_t i = from; i < n; ++i) s += r.metrics[i].mean_employees;
    steady.push_back(n > from ? s / static_cast<double>(n - from) : 0.0);
    detail += fmt("%.2f ", steady.back());
  }
  const double med = harness::median(steady);
  report(11, !any_aborted(open) && std::abs(med - oracle.employees) <= kStaffingSlack,
         fmt("median steady employee count %.2f [%s] vs E* = %d (slack %d)", med, detail.c_str(),
             oracle.employees, kStaffingSlack));
}

void prediction_accuracy(Runs& runs) {
  const auto cfg = closed_config(agents::Variant::kLia2c);
  const auto& lia = runs.get("lia2c", cfg);
  std::int64_t ah = 0, at = 0, oh = 0, ot = 0;
  for (const auto& r : lia) {
    const std::size_t n = r.metrics.size();
    const std::size_t from = n > static_cast<std::size_t>(kTailEpisodes) ? n - kTailEpisodes : 0;
    for (std::size_t i = from; i < n; ++i) {
      ah += r.metrics[i].action_hits;
      at += r.metrics[i].action_total;
      oh += r.metrics[i].obs_hits;
      ot += r.metrics[i].obs_total;
    }
  }
  // A uniformly random guess matches the tie-broken label with probability 1/K.
  const double action_chance = 1.0 / static_cast<double>(org::population_categories(false));
  const double obs_chance = 1.0 / org::kPublicObsCount;
  const double aa = at ? static_cast<double>(ah) / at : 0.0;
  const double oa = ot ? static_cast<double>(oh) / ot : 0.0;
  report(12,
         !any_aborted(lia) && aa >= action_chance + kAboveChance && oa >= obs_chance + kAboveChance,
         fmt("action accuracy %.3f (need %.3f), observation accuracy %.3f (need %.3f), last %d "
             "episodes of each seed",
             aa, action_chance + kAboveChance, oa, obs_chance + kAboveChance, kTailEpisodes));
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Runs& runs) {
  const auto cfg = closed_config(agents::Variant::kLia2c);
  const auto& lia = runs.get("lia2c", cfg);
  const auto repeat = runs.run_one("lia2c", cfg, cfg.seeds.front(), "repeat_seed_");
  const auto a = file_bytes(lia.front().dir / "metrics.csv");
  const auto b = file_bytes(repeat.dir / "metrics.csv");
  report(13, !a.empty() && a == b,
         fmt("metrics.csv of two seed-%llu runs: %zu vs %zu bytes, %s",
             static_cast<unsigned long long>(cfg.seeds.front()), a.size(), b.size(),
             a == b ? "bit-identical" : "DIFFERENT"));
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_runs";
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else {
      try {
        selected.insert(std::stoi(arg));
      } catch (const std::exception&) {
        std::fprintf(stderr, "usage: acceptance [--out DIR] [criterion ...]\n");
        return 1;
      }
    }
  }
  auto want = [&](int id) { return selected.empty() || selected.count(id) > 0; };

  Runs runs(out);
  const std::vector<std::pair<int, std::function<void()>>> checks = {
      {1, configuration_dp},
      {2, conjugate_update},
      {3, dirichlet_kl},
      {4, belief_update},
      {5, gradient_fidelity},
      {6, loss_floors},
      {7, no_backprop},
      {8, [&] { desk_scale_learning(runs); }},
      {9, [&] { ordering(runs); }},
      {10, [&] { variance(runs); }},
      {11, [&] { staffing(runs); }},
      {12, [&] { prediction_accuracy(runs); }},
      {13, [&] { determinism(runs); }},
  };
  const auto t0 = Clock::now();
  for (const auto& [id, check] : checks) {
    if (!want(id)) continue;
    try {
      check();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d failing criteria, %.0f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
