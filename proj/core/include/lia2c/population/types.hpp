#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace lia2c::pop {

/// Count of each action across a population of other agents.
struct Configuration {
  std::vector<int> counts;

  Configuration() = default;
  explicit Configuration(std::vector<int> c);

  static Configuration zeros(std::size_t action_count) {
    return Configuration(std::vector<int>(action_count, 0));
  }

  std::size_t action_count() const { return counts.size(); }
  int population_size() const;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Strictly positive, finite concentration vector.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha);
  static DirichletParams uniform(std::size_t action_count, double value = 1.0);

  const std::vector<double>& alpha() const { return alpha_; }
  std::size_t size() const { return alpha_.size(); }
  double total() const;

  friend bool operator==(const DirichletParams&, const DirichletParams&) = default;

 private:
  std::vector<double> alpha_;
};

/// Point on the probability simplex (sum within 1e-9 of one).
class ActionDistribution {
 public:
  explicit ActionDistribution(std::vector<double> theta);
  static ActionDistribution uniform(std::size_t action_count);

  const std::vector<double>& theta() const { return theta_; }
  std::size_t size() const { return theta_.size(); }
  double operator[](std::size_t i) const { return theta_[i]; }

 private:
  std::vector<double> theta_;
};

/// Counts reported to one agent about the others; may be misperceived.
struct PrivateObservation {
  Configuration observed_counts;
  double noise_rate = 0.0;
};

void write_csv_row(std::ostream& out, const Configuration& c);
void write_csv_row(std::ostream& out, const DirichletParams& p);

}  // namespace lia2c::pop
