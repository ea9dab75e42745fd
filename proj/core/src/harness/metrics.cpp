#include "lia2c/harness/metrics.hpp"

#include <cstdio>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace lia2c::harness {
namespace {

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

constexpr std::size_t kColumns = 16;

}  // namespace

double MetricsRecord::action_accuracy() const {
  return action_total ? static_cast<double>(action_hits) / static_cast<double>(action_total) : 0.0;
}

double MetricsRecord::obs_accuracy() const {
  return obs_total ? static_cast<double>(obs_hits) / static_cast<double>(obs_total) : 0.0;
}

const std::string& metrics_header() {
  static const std::string h =
      "step,episode,seed,mean_return,manager_return,roster_size,mean_employees,actor_loss,"
      "critic_loss,ed_loss,action_hits,action_total,obs_hits,obs_total,action_acc,obs_acc,"
      "returns";
  return h;
}

std::string metrics_row(const MetricsRecord& r) {
  std::string s = std::to_string(r.step) + "," + std::to_string(r.episode) + "," +
                  std::to_string(r.seed) + "," + fmt(r.mean_return) + "," +
                  fmt(r.manager_return) + "," + std::to_string(r.roster_size) + "," +
                  fmt(r.mean_employees) + "," + fmt(r.actor_loss) + "," + fmt(r.critic_loss) +
                  "," + fmt(r.ed_loss) + "," + std::to_string(r.action_hits) + "," +
                  std::to_string(r.action_total) + "," + std::to_string(r.obs_hits) + "," +
                  std::to_string(r.obs_total) + "," + fmt(r.action_accuracy()) + "," +
                  fmt(r.obs_accuracy()) + ",";
  for (std::size_t i = 0; i < r.returns.size(); ++i) {
    if (i) s += ";";
    s += fmt(r.returns[i]);
  }
  return s;
}

MetricsWriter::MetricsWriter(const std::string& path) : out_(path, std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open metrics file " + path);
  out_ << metrics_header() << '\n';
  out_.flush();
}

void MetricsWriter::append(const MetricsRecord& r) {
  out_ << metrics_row(r) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("metrics write failed");
}

std::vector<MetricsRecord> read_metrics(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<MetricsRecord> out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // partial trailing line
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (header) {
      header = false;
      if (line != metrics_header()) throw std::runtime_error("unexpected metrics header");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != kColumns + 1) throw std::runtime_error("malformed metrics row: " + line);
    MetricsRecord r;
    r.step = std::stoll(f[0]);
    r.episode = std::stoi(f[1]);
    r.seed = std::stoull(f[2]);
    r.mean_return = std::stod(f[3]);
    r.manager_return = std::stod(f[4]);
    r.roster_size = std::stoi(f[5]);
    r.mean_employees = std::stod(f[6]);
    r.actor_loss = std::stod(f[7]);
    r.critic_loss = std::stod(f[8]);
    r.ed_loss = std::stod(f[9]);
    r.action_hits = std::stoll(f[10]);
    r.action_total = std::stoll(f[11]);
    r.obs_hits = std::stoll(f[12]);
    r.obs_total = std::stoll(f[13]);
    if (!f[16].empty()) {
      for (const auto& v : split(f[16], ';')) r.returns.push_back(std::stod(v));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MetricsRecord> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file " + path);
  return read_metrics(in);
}

}  // namespace lia2c::harness
