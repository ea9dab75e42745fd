#include "lia2c/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lia2c/agents/agent.hpp"
#include "lia2c/harness/analysis.hpp"
#include "lia2c/harness/seeds.hpp"
#include "lia2c/org/trace.hpp"

namespace lia2c::harness {
namespace fs = std::filesystem;
namespace {

struct Slot {
  org::Role role = org::Role::kEmployee;
  std::unique_ptr<agents::Agent> agent;
  std::mt19937_64 noise;
  double episode_return = 0.0;
  bool has_prediction = false;
  std::vector<double> pred_theta;
  std::vector<double> pred_obs;
};

using SlotPtr = std::shared_ptr<Slot>;

pop::Configuration others_configuration(const org::OrgState& state, const org::JointAction& joint,
                                        int viewer, bool open_mode) {
  auto c = pop::Configuration::zeros(org::population_categories(open_mode));
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (state.roster[i].id == viewer) continue;
    ++c.counts[static_cast<std::size_t>(org::population_category(joint[i]))];
  }
  return c;
}

class Trainer {
 public:
  Trainer(const ExperimentConfig& cfg, std::uint64_t seed, const RunOptions& options)
      : cfg_(cfg),
        seed_(seed),
        options_(options),
        env_rng_(derive_seed(seed, Stream::kEnv)),
        employee_cfg_(agent_config(cfg, org::Role::kEmployee)),
        manager_cfg_(agent_config(cfg, org::Role::kManager)) {
    if (cfg_.env.open_mode) {
      manager_ = make_slot(org::Role::kManager);
      initial_ = make_slot(org::Role::kEmployee);
    } else {
      for (int i = 0; i < cfg_.env.n_employees; ++i) {
        employees_.push_back(make_slot(org::Role::kEmployee));
      }
    }
  }

  RunArtifacts run() {
    RunArtifacts art;
    art.seed = seed_;
    std::optional<MetricsWriter> writer;
    if (!options_.out_dir.empty()) {
      fs::create_directories(options_.out_dir);
      std::ofstream conf(fs::path(options_.out_dir) / "config.txt");
      write_experiment(conf, cfg_);
      conf << "# seed = " << seed_ << '\n';
      writer.emplace((fs::path(options_.out_dir) / "metrics.csv").string());
      if (cfg_.write_trace) {
        trace_.emplace((fs::path(options_.out_dir) / "trace.jsonl").string());
      }
    }
    try {
      const int budget = cfg_.episode_budget();
      for (int ep = 0; ep < budget; ++ep) {
        MetricsRecord rec = run_episode(ep, art.embeddings);
        if (writer) writer->append(rec);
        if (options_.on_episode) options_.on_episode(rec);
        art.metrics.push_back(std::move(rec));
        if (cfg_.snapshot_every > 0 && (ep + 1) % cfg_.snapshot_every == 0 &&
            !options_.out_dir.empty()) {
          save_snapshot((fs::path(options_.out_dir) / ("snapshot_ep" + std::to_string(ep + 1) +
                                                       ".bin"))
                            .string(),
                        snapshot());
        }
      }
    } catch (const std::exception& e) {
      art.aborted = true;
      art.error = e.what();
    }
    art.final_snapshot = snapshot();
    if (!options_.out_dir.empty()) {
      save_snapshot((fs::path(options_.out_dir) / "snapshot_final.bin").string(),
                    art.final_snapshot);
      if (options_.capture_embeddings) {
        export_embeddings(art.embeddings,
                          (fs::path(options_.out_dir) / "embeddings.csv").string());
      }
    }
    return art;
  }

 private:
  SlotPtr make_slot(org::Role role) {
    const std::uint64_t serial = next_serial_++;
    auto slot = std::make_shared<Slot>();
    slot->role = role;
    slot->noise.seed(derive_seed(seed_, Stream::kNoise, serial));
    const agents::AgentSeeds seeds{derive_seed(seed_, Stream::kInit, serial),
                                   derive_seed(seed_, Stream::kPolicy, serial),
                                   derive_seed(seed_, Stream::kLatent, serial)};
    slot->agent = std::make_unique<agents::Agent>(
        static_cast<int>(serial), role == org::Role::kManager ? manager_cfg_ : employee_cfg_,
        seeds);
    return slot;
  }

  SlotPtr roster_slot(const org::Member& m) {
    if (!cfg_.env.open_mode) return employees_.at(static_cast<std::size_t>(m.id));
    return m.role == org::Role::kManager ? manager_ : initial_;
  }

  PolicySnapshot snapshot() {
    PolicySnapshot s;
    s.open_mode = cfg_.env.open_mode;
    if (cfg_.env.open_mode) {
      s.entries.push_back({0, org::Role::kManager, manager_->agent->bundle().actor});
      s.entries.push_back({1, org::Role::kEmployee, initial_->agent->bundle().actor});
    } else {
      for (std::size_t i = 0; i < employees_.size(); ++i) {
        s.entries.push_back(
            {static_cast<int>(i), org::Role::kEmployee, employees_[i]->agent->bundle().actor});
      }
    }
    return s;
  }

  MetricsRecord run_episode(int episode, std::vector<EmbeddingRow>& embeddings) {
    const bool open = cfg_.env.open_mode;
    auto rr = org::reset(cfg_.env, env_rng_);
    org::OrgState state = std::move(rr.state);
    std::vector<int> obs;
    for (auto o : rr.observations) obs.push_back(static_cast<int>(o));

    std::map<int, SlotPtr> active;
    std::vector<SlotPtr> participants;
    for (const auto& m : state.roster) {
      auto s = roster_slot(m);
      active[m.id] = s;
      participants.push_back(s);
    }
    const Slot* tracked = nullptr;
    if (options_.capture_embeddings && options_.embedding_learner >= 0 &&
        options_.embedding_learner < static_cast<int>(participants.size())) {
      tracked = participants[static_cast<std::size_t>(options_.embedding_learner)].get();
    }
    for (auto& s : participants) {
      s->agent->begin_episode(static_cast<int>(state.roster.size()) - 1);
      s->episode_return = 0.0;
      s->has_prediction = false;
    }

    AccuracyCounts acc;
    double employee_ticks = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    double ed_loss = 0.0;
    int learned = 0;
    auto finish = [&](Slot& s) {
      const auto stats = s.agent->end_episode(true);
      if (stats.learned) {
        actor_loss += stats.actor_loss;
        critic_loss += stats.critic_loss;
        ed_loss += stats.ed_loss.total;
        ++learned;
      }
    };

    const int horizon = cfg_.env.horizon;
    for (int t = 0; t < horizon; ++t) {
      employee_ticks += state.employee_count();
      org::JointAction joint(state.roster.size());
      for (std::size_t i = 0; i < state.roster.size(); ++i) {
        const auto& m = state.roster[i];
        const int a = active.at(m.id)->agent->act(obs[i]);
        joint[i] = org::role_actions(m.role, open)[static_cast<std::size_t>(a)];
      }
      for (std::size_t i = 0; i < state.roster.size(); ++i) {
        Slot& s = *active.at(state.roster[i].id);
        if (!s.has_prediction) continue;
        acc.add({s.pred_theta, s.pred_obs,
                 others_configuration(state, joint, state.roster[i].id, open), obs[i]});
        s.has_prediction = false;
      }

      const auto rewards = org::rewards(cfg_.env.rewards, state, joint);
      if (trace_) trace_->write(t, state, joint, rewards);
      org::OrgState next = org::transition(state, joint);
      std::vector<int> hired;
      if (open) next = org::apply_openness(next, joint, [&hired](int id) { hired.push_back(id); });

      std::vector<int> next_obs(next.roster.size());
      for (auto& o : next_obs) {
        o = static_cast<int>(org::public_obs(next, cfg_.env.epsilon, env_rng_));
      }
      const bool last = t + 1 == horizon;
      for (std::size_t i = 0; i < state.roster.size(); ++i) {
        const int id = state.roster[i].id;
        Slot& s = *active.at(id);
        const int ni = next.index_of(id);
        auto priv = org::private_obs(state, joint, id, cfg_.env.delta, open, s.noise);
        agents::StepFeedback fb;
        fb.reward = rewards[i];
        fb.observed_counts = std::move(priv.observed_counts);
        fb.next_public_obs = ni >= 0 ? next_obs[static_cast<std::size_t>(ni)]
                                     : static_cast<int>(org::observation_for(next.level));
        fb.done = last || ni < 0;
        fb.next_population_size = ni >= 0 ? static_cast<int>(next.roster.size()) - 1 : 0;
        const auto& pred = s.agent->observe(fb);
        s.episode_return += rewards[i];
        if (!fb.done) {
          s.has_prediction = true;
          s.pred_theta = pred.theta;
          s.pred_obs = pred.obs;
        }
        if (&s == tracked) {
          embeddings.push_back({steps_ + t, episode, pred.latent, pred.theta});
        }
      }

      for (const auto& m : state.roster) {
        if (next.index_of(m.id) >= 0) continue;
        SlotPtr s = active.at(m.id);
        finish(*s);
        active.erase(m.id);
      }
      for (int id : hired) {
        auto s = make_slot(org::Role::kEmployee);
        s->agent->begin_episode(static_cast<int>(next.roster.size()) - 1);
        active[id] = s;
        participants.push_back(s);
      }
      state = std::move(next);
      obs = std::move(next_obs);
    }
    for (auto& [id, s] : active) finish(*s);
    steps_ += horizon;

    MetricsRecord rec;
    rec.step = steps_;
    rec.episode = episode;
    rec.seed = seed_;
    double total = 0.0;
    for (const auto& s : participants) {
      rec.returns.push_back(s->episode_return);
      total += s->episode_return;
    }
    rec.mean_return = total / static_cast<double>(participants.size());
    rec.manager_return = open ? manager_->episode_return : 0.0;
    rec.roster_size = static_cast<int>(state.roster.size());
    rec.mean_employees = employee_ticks / horizon;
    if (learned > 0) {
      rec.actor_loss = actor_loss / learned;
      rec.critic_loss = critic_loss / learned;
      rec.ed_loss = ed_loss / learned;
    }
    rec.action_hits = acc.action_hits;
    rec.action_total = acc.action_total;
    rec.obs_hits = acc.obs_hits;
    rec.obs_total = acc.obs_total;
    return rec;
  }

  const ExperimentConfig& cfg_;
  std::uint64_t seed_;
  const RunOptions& options_;
  std::mt19937_64 env_rng_;
  agents::AgentConfig employee_cfg_;
  agents::AgentConfig manager_cfg_;
  std::uint64_t next_serial_ = 0;
  std::int64_t steps_ = 0;
  std::vector<SlotPtr> employees_;
  SlotPtr manager_;
  SlotPtr initial_;
  std::optional<org::TraceWriter> trace_;
};

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

void check_actor(const nn::Mlp& actor, org::Role role, bool open) {
  if (actor.input_size() != static_cast<std::size_t>(org::kPublicObsCount) ||
      actor.output_size() != org::role_actions(role, open).size()) {
    throw std::invalid_argument("incompatible snapshot: actor shape does not match the role");
  }
}

}  // namespace

RunArtifacts run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                          const RunOptions& options) {
  cfg.validate();
  Trainer trainer(cfg, seed, options);
  return trainer.run();
}

std::vector<RunArtifacts> run_all(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  std::vector<RunArtifacts> out;
  for (std::uint64_t seed : cfg.seeds) {
    RunOptions opts;
    if (!out_dir.empty()) opts.out_dir = (fs::path(out_dir) / ("seed_" + std::to_string(seed))).string();
    opts.capture_embeddings = cfg.write_embeddings;
    out.push_back(run_training(cfg, seed, opts));
  }
  return out;
}

EvalSummary evaluate(const PolicySnapshot& snapshot, const org::OrgConfig& env, int episodes,
                     std::uint64_t seed, bool greedy) {
  env.validate();
  if (episodes < 0) throw std::invalid_argument("episode count must be nonnegative");
  if (snapshot.open_mode != env.open_mode) {
    throw std::invalid_argument("incompatible snapshot: open/closed mode differs");
  }
  const PolicySnapshot::Entry* manager = nullptr;
  const PolicySnapshot::Entry* employee = snapshot.first_with_role(org::Role::kEmployee);
  if (env.open_mode) {
    manager = snapshot.first_with_role(org::Role::kManager);
    if (!manager || !employee) {
      throw std::invalid_argument("incompatible snapshot: needs a manager and an employee policy");
    }
    check_actor(manager->actor, org::Role::kManager, true);
    check_actor(employee->actor, org::Role::kEmployee, true);
  } else {
    for (int id = 0; id < env.n_employees; ++id) {
      const auto* e = snapshot.find(id);
      if (!e || e->role != org::Role::kEmployee) {
        throw std::invalid_argument("incompatible snapshot: no policy for employee " +
                                    std::to_string(id));
      }
      check_actor(e->actor, org::Role::kEmployee, false);
    }
  }

  EvalSummary out;
  out.episodes = episodes;
  std::mt19937_64 env_rng(derive_seed(seed, Stream::kEnv));
  std::uint64_t serial = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    auto rr = org::reset(env, env_rng);
    org::OrgState state = std::move(rr.state);
    std::vector<int> obs;
    for (auto o : rr.observations) obs.push_back(static_cast<int>(o));
    std::map<int, std::mt19937_64> rngs;
    std::map<int, double> returns;
    for (const auto& m : state.roster) {
      rngs.emplace(m.id, std::mt19937_64(derive_seed(seed, Stream::kPolicy, serial++)));
      returns[m.id] = 0.0;
    }
    std::vector<int> roster_sizes;
    for (int t = 0; t < env.horizon; ++t) {
      roster_sizes.push_back(static_cast<int>(state.roster.size()));
      org::JointAction joint(state.roster.size());
      for (std::size_t i = 0; i < state.roster.size(); ++i) {
        const auto& m = state.roster[i];
        const nn::Mlp& actor = !env.open_mode ? snapshot.find(m.id)->actor
                               : m.role == org::Role::kManager ? manager->actor
                                                               : employee->actor;
        const int a = greedy ? argmax(agents::action_probabilities(actor, obs[i]))
                             : agents::select_action(actor, obs[i], rngs.at(m.id));
        joint[i] = org::role_actions(m.role, env.open_mode)[static_cast<std::size_t>(a)];
      }
      const auto rewards = org::rewards(env.rewards, state, joint);
      for (std::size_t i = 0; i < state.roster.size(); ++i) returns[state.roster[i].id] += rewards[i];
      org::OrgState next = org::transition(state, joint);
      if (env.open_mode) {
        next = org::apply_openness(next, joint, [&](int id) {
          rngs.emplace(id, std::mt19937_64(derive_seed(seed, Stream::kPolicy, serial++)));
          returns[id] = 0.0;
        });
      }
      obs.assign(next.roster.size(), 0);
      for (auto& o : obs) o = static_cast<int>(org::public_obs(next, env.epsilon, env_rng));
      state = std::move(next);
    }
    double total = 0.0;
    for (const auto& [id, r] : returns) total += r;
    out.returns.push_back(total / static_cast<double>(returns.size()));
    out.roster_trajectory.push_back(std::move(roster_sizes));
  }
  out.mean_return = mean(out.returns);
  out.std_return = sample_std(out.returns);
  return out;
}

void export_embeddings(const std::vector<EmbeddingRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write embeddings to " + path);
  const std::size_t dz = rows.empty() ? 0 : rows.front().z.size();
  const std::size_t k = rows.empty() ? 0 : rows.front().theta.size();
  out << "step,episode";
  for (std::size_t i = 0; i < dz; ++i) out << ",z" << i + 1;
  for (std::size_t i = 0; i < k; ++i) out << ",theta" << i + 1;
  out << '\n';
  for (const auto& r : rows) {
    if (r.z.size() != dz || r.theta.size() != k) {
      throw std::invalid_argument("embedding rows have inconsistent widths");
    }
    out << r.step << ',' << r.episode;
    for (double v : r.z) out << ',' << fmt(v);
    for (double v : r.theta) out << ',' << fmt(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("embedding write failed: " + path);
}

std::vector<EmbeddingRow> read_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings " + path);
  std::string line;
  if (!std::getline(in, line)) return {};
  std::size_t dz = 0;
  std::size_t k = 0;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (col.rfind("theta", 0) == 0) {
        ++k;
      } else if (col.rfind('z', 0) == 0) {
        ++dz;
      }
    }
  }
  std::vector<EmbeddingRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    EmbeddingRow r;
    std::getline(ss, cell, ',');
    r.step = std::stoll(cell);
    std::getline(ss, cell, ',');
    r.episode = std::stoi(cell);
    for (std::size_t i = 0; i < dz + k; ++i) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short embedding row");
      (i < dz ? r.z : r.theta).push_back(std::stod(cell));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lia2c::harness
