#include "lia2c/oracles/enumeration.hpp"

#include <stdexcept>

namespace lia2c::oracles {
namespace {

/// Calls f on every index vector in the mixed-radix range given by `radix`.
template <typename F>
void for_each_index(const std::vector<std::size_t>& radix, F&& f) {
  std::vector<std::size_t> idx(radix.size(), 0);
  for (std::size_t r : radix) {
    if (r == 0) return;
  }
  while (true) {
    f(idx);
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == radix[pos]) idx[pos++] = 0;
    if (pos == idx.size()) return;
  }
}

}  // namespace

std::map<Counts, double> joint_config_distribution(
    const std::vector<std::vector<double>>& per_agent) {
  std::map<Counts, double> out;
  if (per_agent.empty()) return out;
  const std::size_t k = per_agent.front().size();
  std::vector<std::size_t> radix(per_agent.size(), k);
  for_each_index(radix, [&](const std::vector<std::size_t>& a) {
    Counts c(k, 0);
    double p = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++c[a[i]];
      p *= per_agent[i][a[i]];
    }
    out[c] += p;
  });
  return out;
}

double joint_misreport_likelihood(const Counts& true_counts, const Counts& observed,
                                  double delta) {
  const std::size_t k = true_counts.size();
  std::vector<std::size_t> truth;
  for (std::size_t a = 0; a < k; ++a) {
    for (int i = 0; i < true_counts[a]; ++i) truth.push_back(a);
  }
  if (truth.empty()) return observed == Counts(k, 0) ? 1.0 : 0.0;
  double total = 0.0;
  std::vector<std::size_t> radix(truth.size(), k);
  for_each_index(radix, [&](const std::vector<std::size_t>& report) {
    Counts c(k, 0);
    double p = 1.0;
    for (std::size_t i = 0; i < report.size(); ++i) {
      ++c[report[i]];
      p *= report[i] == truth[i] ? 1.0 - delta : delta / static_cast<double>(k - 1);
    }
    if (c == observed) total += p;
  });
  return total;
}

std::vector<std::vector<double>> joint_model_posterior(const std::vector<AgentModels>& agents,
                                                       std::size_t action_count,
                                                       const CountLikelihood& likelihood) {
  const std::size_t n = agents.size();
  std::vector<std::size_t> radix;
  for (const auto& a : agents) radix.push_back(a.prior.size());
  for (std::size_t i = 0; i < n; ++i) radix.push_back(action_count);

  std::vector<std::vector<double>> post(n);
  for (std::size_t j = 0; j < n; ++j) post[j].assign(agents[j].prior.size(), 0.0);
  for_each_index(radix, [&](const std::vector<std::size_t>& idx) {
    Counts c(action_count, 0);
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t m = idx[j];
      const std::size_t a = idx[n + j];
      p *= agents[j].prior[m] * agents[j].policy[m][a];
      ++c[a];
    }
    if (p == 0.0) return;
    p *= likelihood(c);
    for (std::size_t j = 0; j < n; ++j) post[j][idx[j]] += p;
  });
  for (auto& row : post) {
    double s = 0.0;
    for (double v : row) s += v;
    if (!(s > 0.0)) throw std::domain_error("observation impossible under every joint model");
    for (double& v : row) v /= s;
  }
  return post;
}

}  // namespace lia2c::oracles
