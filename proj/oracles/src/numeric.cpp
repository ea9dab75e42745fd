#include "lia2c/oracles/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lia2c::oracles {

std::vector<double> reference_forward(const std::vector<std::size_t>& sizes,
                                      std::span<const double> params, bool relu, bool softmax,
                                      std::span<const double> input) {
  std::vector<double> x(input.begin(), input.end());
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    std::vector<double> y(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < in; ++c) acc += params[off + r * in + c] * x[c];
      y[r] = acc;
    }
    off += in * out;
    for (std::size_t r = 0; r < out; ++r) y[r] += params[off + r];
    off += out;
    if (l + 2 < sizes.size()) {
      for (double& v : y) v = relu ? std::max(0.0, v) : std::tanh(v);
    }
    x = std::move(y);
  }
  if (off != params.size()) throw std::invalid_argument("parameter count mismatch");
  if (softmax) {
    const double m = *std::max_element(x.begin(), x.end());
    double s = 0.0;
    for (double& v : x) s += (v = std::exp(v - m));
    for (double& v : x) v /= s;
  }
  return x;
}

std::vector<double> central_difference(const ScalarFn& f, std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double relative_error(std::span<const double> a, std::span<const double> b, double floor) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_error: size mismatch");
  double diff = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

double reference_log_dirichlet(std::span<const double> alpha, std::span<const double> theta) {
  double total = 0.0;
  double out = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    total += alpha[i];
    out += (alpha[i] - 1.0) * std::log(theta[i]) - std::lgamma(alpha[i]);
  }
  return out + std::lgamma(total);
}

double simplex_integral_3(const std::function<double(double, double, double)>& f, int n) {
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double v = (j + 0.5) * h;
      sum += f(u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)) * (1.0 - u);
    }
  }
  return sum * h * h;
}

double monte_carlo_kl(std::span<const double> p, std::span<const double> q, int samples,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::gamma_distribution<double>> gammas;
  for (double a : p) gammas.emplace_back(a, 1.0);
  std::vector<double> theta(p.size());
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += (theta[i] = gammas[i](rng));
    for (double& t : theta) t /= total;
    acc += reference_log_dirichlet(p, theta) - reference_log_dirichlet(q, theta);
  }
  return acc / samples;
}

std::vector<std::vector<double>> dirichlet_covariance(std::span<const double> alpha) {
  double a0 = 0.0;
  for (double a : alpha) a0 += a;
  const std::size_t k = alpha.size();
  std::vector<std::vector<double>> cov(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double mi = alpha[i] / a0;
      const double mj = alpha[j] / a0;
      cov[i][j] = ((i == j ? mi : 0.0) - mi * mj) / (a0 + 1.0);
    }
  }
  return cov;
}

std::vector<std::vector<double>> adam_reference(std::vector<double> x,
                                                const std::vector<std::vector<double>>& grads,
                                                double lr, double beta1, double beta2,
                                                double eps) {
  std::vector<double> m(x.size(), 0.0);
  std::vector<double> v(x.size(), 0.0);
  std::vector<std::vector<double>> out;
  for (std::size_t t = 1; t <= grads.size(); ++t) {
    const auto& g = grads[t - 1];
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = m[i] / (1.0 - std::pow(beta1, static_cast<double>(t)));
      const double vhat = v[i] / (1.0 - std::pow(beta2, static_cast<double>(t)));
      x[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace lia2c::oracles
