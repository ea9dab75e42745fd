#include "lia2c/harness/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lia2c/error.hpp"

namespace lia2c::harness {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto field) {
      t[key] = [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        field(c) = to_double(k, v);
      };
    };
    num("delta", [](ExperimentConfig& c) -> double& { return c.env.delta; });
    num("epsilon", [](ExperimentConfig& c) -> double& { return c.env.epsilon; });
    num("reward.self", [](ExperimentConfig& c) -> double& { return c.env.rewards.self_reward; });
    num("reward.balance",
        [](ExperimentConfig& c) -> double& { return c.env.rewards.balance_reward; });
    num("reward.group", [](ExperimentConfig& c) -> double& { return c.env.rewards.group_reward; });
    num("reward.resign",
        [](ExperimentConfig& c) -> double& { return c.env.rewards.resign_reward; });
    num("reward.hire", [](ExperimentConfig& c) -> double& { return c.env.rewards.hire_reward; });
    num("reward.fire", [](ExperimentConfig& c) -> double& { return c.env.rewards.fire_reward; });
    num("w_group", [](ExperimentConfig& c) -> double& { return c.env.rewards.w_group; });
    num("w_balance", [](ExperimentConfig& c) -> double& { return c.env.rewards.w_balance; });
    num("hire_cost", [](ExperimentConfig& c) -> double& { return c.env.rewards.hire_cost; });
    num("beta", [](ExperimentConfig& c) -> double& { return c.env.rewards.manager_beta; });
    num("gamma", [](ExperimentConfig& c) -> double& { return c.gamma; });
    num("entropy_weight", [](ExperimentConfig& c) -> double& { return c.entropy_weight; });
    num("clip_norm", [](ExperimentConfig& c) -> double& { return c.clip_norm; });
    num("actor_lr", [](ExperimentConfig& c) -> double& { return c.actor_adam.learning_rate; });
    num("critic_lr", [](ExperimentConfig& c) -> double& { return c.critic_adam.learning_rate; });
    num("ed_lr", [](ExperimentConfig& c) -> double& { return c.ed_adam.learning_rate; });
    num("assumed_delta", [](ExperimentConfig& c) -> double& { return c.assumed_delta; });

    t["adam_beta1"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.actor_adam.beta1 = c.critic_adam.beta1 = c.ed_adam.beta1 = to_double(k, v);
    };
    t["adam_beta2"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.actor_adam.beta2 = c.critic_adam.beta2 = c.ed_adam.beta2 = to_double(k, v);
    };
    t["adam_epsilon"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.actor_adam.epsilon = c.critic_adam.epsilon = c.ed_adam.epsilon = to_double(k, v);
    };
    t["n_employees"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.env.n_employees = to_int<int>(k, v);
    };
    t["horizon"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.env.horizon = to_int<int>(k, v);
    };
    t["open_mode"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.env.open_mode = to_bool(k, v);
    };
    t["level_multipliers"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const auto items = split_list(v);
      if (items.size() != c.env.rewards.level_multipliers.size()) {
        throw ConfigError("key '" + k + "': expected five comma-separated values");
      }
      for (std::size_t i = 0; i < items.size(); ++i) {
        c.env.rewards.level_multipliers[i] = to_double(k, items[i]);
      }
    };
    t["variant"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
      c.variant = agents::parse_variant(v);
    };
    t["total_steps"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.total_steps = to_int<std::int64_t>(k, v);
    };
    t["episodes_per_eval"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.episodes_per_eval = to_int<int>(k, v);
    };
    t["seeds"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.seeds.clear();
      for (const auto& item : split_list(v)) c.seeds.push_back(to_int<std::uint64_t>(k, item));
    };
    t["hidden"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.hidden.clear();
      for (const auto& item : split_list(v)) c.hidden.push_back(to_int<std::size_t>(k, item));
    };
    t["latent_dim"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.latent_dim = to_int<std::size_t>(k, v);
    };
    t["encoder_theta"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (v == "decoder") {
        c.encoder_theta = EncoderThetaSource::kDecoder;
      } else if (v == "conjugate") {
        c.encoder_theta = EncoderThetaSource::kConjugate;
      } else {
        throw ConfigError("key '" + k + "': expected decoder or conjugate");
      }
    };
    t["snapshot_every"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.snapshot_every = to_int<int>(k, v);
    };
    t["smoothing_window"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.smoothing_window = to_int<int>(k, v);
    };
    t["write_embeddings"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.write_embeddings = to_bool(k, v);
    };
    t["write_trace"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.write_trace = to_bool(k, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_key_values(in);
}

int ExperimentConfig::episode_budget() const {
  return static_cast<int>((total_steps + env.horizon - 1) / env.horizon);
}

void ExperimentConfig::validate() const {
  env.validate();
  if (total_steps <= 0) throw ConfigError("total_steps must be positive");
  if (episodes_per_eval <= 0) throw ConfigError("episodes_per_eval must be positive");
  if (seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (entropy_weight < 0.0) throw ConfigError("entropy_weight must be nonnegative");
  if (!(clip_norm > 0.0)) throw ConfigError("clip_norm must be positive");
  for (const auto* a : {&actor_adam, &critic_adam, &ed_adam}) {
    if (a->learning_rate < 0.0) throw ConfigError("learning rates must be nonnegative");
    if (!(a->beta1 >= 0.0 && a->beta1 < 1.0) || !(a->beta2 >= 0.0 && a->beta2 < 1.0)) {
      throw ConfigError("adam betas must lie in [0, 1)");
    }
    if (!(a->epsilon > 0.0)) throw ConfigError("adam epsilon must be positive");
  }
  if (hidden.empty()) throw ConfigError("hidden must list at least one layer");
  for (auto h : hidden) {
    if (h == 0) throw ConfigError("hidden layer sizes must be positive");
  }
  if (latent_dim == 0) throw ConfigError("latent_dim must be positive");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be nonnegative");
  if (smoothing_window <= 0) throw ConfigError("smoothing_window must be positive");
  const double d = effective_assumed_delta();
  const double k = static_cast<double>(org::population_categories(env.open_mode));
  if (d >= (k - 1.0) / k) throw ConfigError("assumed_delta too large to rectify");
}

ExperimentConfig experiment_from(const KeyValues& kv) {
  ExperimentConfig cfg;
  const auto& table = setters();
  for (const auto& [key, value] : kv) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  return experiment_from(load_key_values(path));
}

KeyValues to_key_values(const ExperimentConfig& c) {
  const auto& r = c.env.rewards;
  KeyValues kv;
  kv["n_employees"] = std::to_string(c.env.n_employees);
  kv["open_mode"] = c.env.open_mode ? "true" : "false";
  kv["delta"] = fmt(c.env.delta);
  kv["epsilon"] = fmt(c.env.epsilon);
  kv["horizon"] = std::to_string(c.env.horizon);
  kv["reward.self"] = fmt(r.self_reward);
  kv["reward.balance"] = fmt(r.balance_reward);
  kv["reward.group"] = fmt(r.group_reward);
  kv["reward.resign"] = fmt(r.resign_reward);
  kv["reward.hire"] = fmt(r.hire_reward);
  kv["reward.fire"] = fmt(r.fire_reward);
  kv["w_group"] = fmt(r.w_group);
  kv["w_balance"] = fmt(r.w_balance);
  kv["level_multipliers"] =
      join(std::vector<double>(r.level_multipliers.begin(), r.level_multipliers.end()));
  kv["hire_cost"] = fmt(r.hire_cost);
  kv["beta"] = fmt(r.manager_beta);
  kv["variant"] = std::string(agents::variant_name(c.variant));
  kv["total_steps"] = std::to_string(c.total_steps);
  kv["episodes_per_eval"] = std::to_string(c.episodes_per_eval);
  kv["seeds"] = join(c.seeds);
  kv["gamma"] = fmt(c.gamma);
  kv["entropy_weight"] = fmt(c.entropy_weight);
  kv["clip_norm"] = fmt(c.clip_norm);
  kv["actor_lr"] = fmt(c.actor_adam.learning_rate);
  kv["critic_lr"] = fmt(c.critic_adam.learning_rate);
  kv["ed_lr"] = fmt(c.ed_adam.learning_rate);
  kv["adam_beta1"] = fmt(c.actor_adam.beta1);
  kv["adam_beta2"] = fmt(c.actor_adam.beta2);
  kv["adam_epsilon"] = fmt(c.actor_adam.epsilon);
  kv["hidden"] = join(c.hidden);
  kv["latent_dim"] = std::to_string(c.latent_dim);
  kv["assumed_delta"] = fmt(c.assumed_delta);
  kv["encoder_theta"] = c.encoder_theta == EncoderThetaSource::kDecoder ? "decoder" : "conjugate";
  kv["snapshot_every"] = std::to_string(c.snapshot_every);
  kv["smoothing_window"] = std::to_string(c.smoothing_window);
  kv["write_embeddings"] = c.write_embeddings ? "true" : "false";
  kv["write_trace"] = c.write_trace ? "true" : "false";
  return kv;
}

void write_experiment(std::ostream& out, const ExperimentConfig& cfg) {
  for (const auto& [k, v] : to_key_values(cfg)) out << k << " = " << v << '\n';
}

agents::AgentConfig agent_config(const ExperimentConfig& cfg, org::Role role) {
  agents::AgentConfig a;
  a.variant = cfg.variant;
  a.dims.obs_categories = org::kPublicObsCount;
  a.dims.self_actions = org::role_actions(role, cfg.env.open_mode).size();
  a.dims.population_actions = org::population_categories(cfg.env.open_mode);
  a.dims.latent_dim = cfg.latent_dim;
  a.dims.hidden = cfg.hidden;
  a.bundle.gamma = cfg.gamma;
  a.bundle.entropy_weight = cfg.entropy_weight;
  a.bundle.clip_norm = cfg.clip_norm;
  a.bundle.actor_adam = cfg.actor_adam;
  a.bundle.critic_adam = cfg.critic_adam;
  a.ed_adam = cfg.ed_adam;
  a.assumed_delta = cfg.effective_assumed_delta();
  a.encoder_theta_from_conjugate = cfg.encoder_theta == EncoderThetaSource::kConjugate;
  return a;
}

}  // namespace lia2c::harness
