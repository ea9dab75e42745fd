#include "lia2c/nn/mlp.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lia2c/error.hpp"

namespace lia2c::nn {
namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMutMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void apply_activation(Activation activation, Matrix& m) {
  switch (activation) {
    case Activation::kTanh:
      m = m.array().tanh();
      break;
    case Activation::kRelu:
      m = m.cwiseMax(0.0);
      break;
  }
}

// Derivative expressed through the activation output.
Matrix activation_derivative(Activation activation, const Matrix& out) {
  switch (activation) {
    case Activation::kTanh:
      return (1.0 - out.array().square()).matrix();
    case Activation::kRelu:
      return (out.array() > 0.0).cast<double>().matrix();
  }
  return Matrix::Zero(out.rows(), out.cols());
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_sizes, Activation activation, Head head)
    : layer_sizes_(std::move(layer_sizes)), activation_(activation), head_(head) {
  if (layer_sizes_.size() < 2) {
    throw DimensionError("Mlp needs at least an input and an output layer");
  }
  for (std::size_t s : layer_sizes_) {
    if (s == 0) throw DimensionError("Mlp layer sizes must be positive");
  }
  params_.assign(parameter_count(layer_sizes_), 0.0);
}

std::size_t Mlp::parameter_count(std::span<const std::size_t> layer_sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    n += (layer_sizes[l] + 1) * layer_sizes[l + 1];
  }
  return n;
}

void Mlp::initialize(std::mt19937_64& rng) {
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t fan_in = layer_sizes_[l];
    const std::size_t fan_out = layer_sizes_[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t i = 0; i < fan_in * fan_out; ++i) params_[offset + i] = dist(rng);
    offset += fan_in * fan_out;
    for (std::size_t i = 0; i < fan_out; ++i) params_[offset + i] = 0.0;
    offset += fan_out;
  }
}

void Mlp::set_parameters(std::span<const double> params) {
  if (params.size() != params_.size()) {
    throw DimensionError("parameter vector has length " + std::to_string(params.size()) +
                         ", expected " + std::to_string(params_.size()));
  }
  params_.assign(params.begin(), params.end());
}

void Mlp::check_input_rows(Eigen::Index rows) const {
  if (static_cast<std::size_t>(rows) != input_size()) {
    throw DimensionError("input has length " + std::to_string(rows) + ", expected " +
                         std::to_string(input_size()));
  }
}

Vector Mlp::forward(std::span<const double> input) const {
  Matrix in = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
  return forward_batch(in).col(0);
}

Matrix Mlp::forward_batch(const Matrix& inputs) const {
  check_input_rows(inputs.rows());
  Matrix x = inputs;
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(layer_sizes_[l]);
    const auto fan_out = static_cast<Eigen::Index>(layer_sizes_[l + 1]);
    RowMajorMap w(params_.data() + offset, fan_out, fan_in);
    offset += static_cast<std::size_t>(fan_in * fan_out);
    Eigen::Map<const Vector> b(params_.data() + offset, fan_out);
    offset += static_cast<std::size_t>(fan_out);
    Matrix y = w * x;
    y.colwise() += b;
    if (l + 1 < layer_count()) apply_activation(activation_, y);
    x = std::move(y);
  }
  if (head_ == Head::kSoftmax) return softmax_columns(x);
  return x;
}

Matrix Mlp::forward_batch(const Matrix& inputs, Tape& tape) const {
  check_input_rows(inputs.rows());
  tape.layer_inputs.clear();
  tape.layer_inputs.reserve(layer_count());
  tape.layer_inputs.push_back(inputs);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(layer_sizes_[l]);
    const auto fan_out = static_cast<Eigen::Index>(layer_sizes_[l + 1]);
    RowMajorMap w(params_.data() + offset, fan_out, fan_in);
    offset += static_cast<std::size_t>(fan_in * fan_out);
    Eigen::Map<const Vector> b(params_.data() + offset, fan_out);
    offset += static_cast<std::size_t>(fan_out);
    Matrix y = w * tape.layer_inputs.back();
    y.colwise() += b;
    if (l + 1 < layer_count()) {
      apply_activation(activation_, y);
      tape.layer_inputs.push_back(std::move(y));
    } else {
      tape.logits = std::move(y);
    }
  }
  tape.output = head_ == Head::kSoftmax ? softmax_columns(tape.logits) : tape.logits;
  return tape.output;
}

Matrix Mlp::backward(const Tape& tape, const Matrix& upstream, std::span<double> grad) const {
  if (head_ == Head::kLinear) return backward_logits(tape, upstream, grad);
  // Softmax Jacobian applied column-wise: p * (u - <u, p>).
  const Matrix& p = tape.output;
  const Eigen::RowVectorXd dots = (upstream.array() * p.array()).colwise().sum();
  Matrix dlogits = p.array() * (upstream.rowwise() - dots).array();
  return backward_logits(tape, dlogits, grad);
}

Matrix Mlp::backward_logits(const Tape& tape, const Matrix& upstream_logits,
                            std::span<double> grad) const {
  if (grad.size() != params_.size()) {
    throw DimensionError("gradient buffer has wrong length");
  }
  if (static_cast<std::size_t>(upstream_logits.rows()) != output_size() ||
      upstream_logits.cols() != tape.logits.cols()) {
    throw DimensionError("upstream gradient shape does not match network output");
  }
  // Offsets of each layer's weight block.
  std::vector<std::size_t> offsets(layer_count());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    offsets[l] = offset;
    offset += (layer_sizes_[l] + 1) * layer_sizes_[l + 1];
  }

  Matrix delta = upstream_logits;
  for (std::size_t li = layer_count(); li-- > 0;) {
    const auto fan_in = static_cast<Eigen::Index>(layer_sizes_[li]);
    const auto fan_out = static_cast<Eigen::Index>(layer_sizes_[li + 1]);
    const Matrix& x = tape.layer_inputs[li];
    RowMajorMap w(params_.data() + offsets[li], fan_out, fan_in);
    RowMajorMutMap gw(grad.data() + offsets[li], fan_out, fan_in);
    Eigen::Map<Vector> gb(grad.data() + offsets[li] + static_cast<std::size_t>(fan_in * fan_out),
                          fan_out);
    gw.noalias() += delta * x.transpose();
    gb += delta.rowwise().sum();
    Matrix dx = w.transpose() * delta;
    if (li > 0) {
      delta = dx.cwiseProduct(activation_derivative(activation_, x));
    } else {
      return dx;
    }
  }
  return delta;
}

std::vector<double> Mlp::grad(std::span<const double> input,
                              std::span<const double> upstream) const {
  if (upstream.size() != output_size()) {
    throw DimensionError("upstream has length " + std::to_string(upstream.size()) +
                         ", expected " + std::to_string(output_size()));
  }
  Tape tape;
  Matrix in = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
  forward_batch(in, tape);
  Matrix up = Eigen::Map<const Vector>(upstream.data(), static_cast<Eigen::Index>(upstream.size()));
  std::vector<double> g(params_.size(), 0.0);
  backward(tape, up, g);
  return g;
}

Matrix softmax_columns(const Matrix& logits) {
  Matrix out = logits;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    auto col = out.col(j);
    col.array() -= col.maxCoeff();
    col = col.array().exp();
    col /= col.sum();
  }
  return out;
}

double clip_global_norm(std::span<double> grads, double max_norm) {
  double sq = 0.0;
  for (double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
  return norm;
}

std::uint64_t parameter_hash(std::span<const double> params) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(params.data());
  for (std::size_t i = 0; i < params.size_bytes(); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace lia2c::nn
