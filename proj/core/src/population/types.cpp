#include "lia2c/population/types.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "lia2c/error.hpp"

namespace lia2c::pop {

Configuration::Configuration(std::vector<int> c) : counts(std::move(c)) {
  for (int n : counts) {
    if (n < 0) throw InvalidDistributionError("configuration counts must be nonnegative");
  }
}

int Configuration::population_size() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw InvalidDistributionError("Dirichlet needs at least one component");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InvalidDistributionError("Dirichlet concentration must be positive and finite, got " +
                                     std::to_string(a));
    }
  }
}

DirichletParams DirichletParams::uniform(std::size_t action_count, double value) {
  return DirichletParams(std::vector<double>(action_count, value));
}

double DirichletParams::total() const {
  return std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
}

ActionDistribution::ActionDistribution(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.empty()) throw InvalidDistributionError("empty action distribution");
  double sum = 0.0;
  for (double t : theta_) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InvalidDistributionError("action probabilities must be finite and nonnegative");
    }
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidDistributionError("action probabilities sum to " + std::to_string(sum));
  }
}

ActionDistribution ActionDistribution::uniform(std::size_t action_count) {
  return ActionDistribution(
      std::vector<double>(action_count, 1.0 / static_cast<double>(action_count)));
}

void write_csv_row(std::ostream& out, const Configuration& c) {
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    if (i) out << ',';
    out << c.counts[i];
  }
  out << '\n';
}

void write_csv_row(std::ostream& out, const DirichletParams& p) {
  char buf[32];
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", p.alpha()[i]);
    out << buf;
  }
  out << '\n';
}

}  // namespace lia2c::pop
