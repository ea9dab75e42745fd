#include "lia2c/population/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>

#include "lia2c/error.hpp"

namespace lia2c::pop {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(what);
}

// log of a Gamma(shape, 1) draw. Shapes below one use
// Gamma(a) = Gamma(a + 1) * U^(1/a) so tiny shapes do not underflow.
double log_gamma_draw(double shape, std::mt19937_64& rng) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> g(shape, 1.0);
    return std::log(g(rng));
  }
  std::gamma_distribution<double> g(shape + 1.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = g(rng);
  double v = u(rng);
  while (v <= 0.0) v = u(rng);
  return std::log(x) + std::log(v) / shape;
}

}  // namespace

double log_dirichlet_density(const DirichletParams& p, const ActionDistribution& t) {
  require_same_size(p.size(), t.size(), "Dirichlet and action distribution dimensions differ");
  double result = std::lgamma(p.total());
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double a = p.alpha()[n];
    const double th = t[n];
    result -= std::lgamma(a);
    if (th == 0.0) {
      if (a < 1.0) throw InfiniteDensityError("Dirichlet density is infinite on this boundary");
      if (a > 1.0) return -std::numeric_limits<double>::infinity();
      continue;
    }
    result += (a - 1.0) * std::log(th);
  }
  return result;
}

double dirichlet_density(const DirichletParams& p, const ActionDistribution& t) {
  return std::exp(log_dirichlet_density(p, t));
}

ActionDistribution sample_theta(const DirichletParams& p, std::mt19937_64& rng) {
  std::vector<double> logs(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) logs[n] = log_gamma_draw(p.alpha()[n], rng);
  const double mx = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double& l : logs) {
    l = std::exp(l - mx);
    sum += l;
  }
  for (double& l : logs) l /= sum;
  // Force an exact simplex point against accumulated rounding.
  double rest = 1.0;
  for (std::size_t n = 0; n + 1 < logs.size(); ++n) rest -= logs[n];
  logs.back() = std::max(0.0, rest);
  return ActionDistribution(std::move(logs));
}

ActionDistribution mean_action(const DirichletParams& p) {
  const double total = p.total();
  std::vector<double> theta(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) theta[n] = p.alpha()[n] / total;
  return ActionDistribution(std::move(theta));
}

DirichletParams posterior_update(const DirichletParams& p, const Configuration& rectified) {
  require_same_size(p.size(), rectified.action_count(),
                    "posterior_update: configuration and Dirichlet dimensions differ");
  std::vector<double> alpha = p.alpha();
  for (std::size_t n = 0; n < alpha.size(); ++n) alpha[n] += rectified.counts[n];
  return DirichletParams(std::move(alpha));
}

double dirichlet_kl(const DirichletParams& p, const DirichletParams& q) {
  require_same_size(p.size(), q.size(), "dirichlet_kl: dimensions differ");
  using boost::math::digamma;
  const double p0 = p.total();
  double kl = std::lgamma(p0) - std::lgamma(q.total());
  const double psi0 = digamma(p0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double a = p.alpha()[n];
    const double b = q.alpha()[n];
    kl += std::lgamma(b) - std::lgamma(a) + (a - b) * (digamma(a) - psi0);
  }
  // Rounding can leave tiny negative values for near-identical arguments.
  return std::max(kl, 0.0);
}

DirichletParams resize_population(const DirichletParams& p, int old_size, int new_size) {
  if (old_size <= 0 || new_size <= 0 || old_size == new_size) return p;
  const double scale = static_cast<double>(new_size) / static_cast<double>(old_size);
  std::vector<double> alpha = p.alpha();
  for (double& a : alpha) a *= scale;
  return DirichletParams(std::move(alpha));
}

}  // namespace lia2c::pop
