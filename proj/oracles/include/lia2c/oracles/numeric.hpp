#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lia2c::oracles {

/// Loop-based MLP evaluation over the library's parameter layout
/// (row-major weights then biases, layer by layer).
std::vector<double> reference_forward(const std::vector<std::size_t>& sizes,
                                      std::span<const double> params, bool relu, bool softmax,
                                      std::span<const double> input);

using ScalarFn = std::function<double(std::span<const double>)>;

std::vector<double> central_difference(const ScalarFn& f, std::vector<double> x, double h = 1e-5);

/// ||a - b|| / max(||a||, ||b||, floor).
double relative_error(std::span<const double> a, std::span<const double> b, double floor = 1e-7);

double reference_log_dirichlet(std::span<const double> alpha, std::span<const double> theta);

/// Integral of f over the 2-simplex by the midpoint rule on the map
/// (u, v) -> (u, (1-u) v, (1-u)(1-v)).
double simplex_integral_3(const std::function<double(double, double, double)>& f, int n);

/// Mean of log Dir(theta; p) - log Dir(theta; q) over theta drawn from Dir(p).
double monte_carlo_kl(std::span<const double> p, std::span<const double> q, int samples,
                      std::uint64_t seed);

std::vector<std::vector<double>> dirichlet_covariance(std::span<const double> alpha);

/// Parameter vector after each of the given gradient steps.
std::vector<std::vector<double>> adam_reference(std::vector<double> x,
                                                const std::vector<std::vector<double>>& grads,
                                                double lr, double beta1, double beta2, double eps);

}  // namespace lia2c::oracles
