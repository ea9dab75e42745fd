#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lia2c::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation : std::uint32_t { kTanh = 0, kRelu = 1 };
enum class Head : std::uint32_t { kLinear = 0, kSoftmax = 1 };

/// Intermediate values recorded by a forward pass, consumed by backward.
/// Column j of every matrix belongs to sample j of the batch.
struct Tape {
  std::vector<Matrix> layer_inputs;  // input to each layer; [0] is the batch
  Matrix logits;
  Matrix output;
};

/// Fully connected feed-forward network with a single flat parameter vector.
///
/// Parameter layout, layer by layer in order: the fan_out x fan_in weight
/// matrix in row-major order, followed by the fan_out biases. Hidden layers
/// apply `activation`; the last layer is affine and is followed by the head
/// (identity or softmax).
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<std::size_t> layer_sizes, Activation activation, Head head);

  static std::size_t parameter_count(std::span<const std::size_t> layer_sizes);

  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  void initialize(std::mt19937_64& rng);

  std::size_t input_size() const { return layer_sizes_.front(); }
  std::size_t output_size() const { return layer_sizes_.back(); }
  std::size_t layer_count() const { return layer_sizes_.size() - 1; }
  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  Activation activation() const { return activation_; }
  Head head() const { return head_; }

  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  void set_parameters(std::span<const double> params);

  Vector forward(std::span<const double> input) const;
  Matrix forward_batch(const Matrix& inputs) const;
  Matrix forward_batch(const Matrix& inputs, Tape& tape) const;

  /// Back-propagates `upstream` (d objective / d output) through the head
  /// and layers. Parameter gradients are added into `grad`; the gradient
  /// with respect to the inputs is returned.
  Matrix backward(const Tape& tape, const Matrix& upstream,
                  std::span<double> grad) const;

  /// Same as backward but `upstream` is taken with respect to the logits,
  /// skipping the head Jacobian.
  Matrix backward_logits(const Tape& tape, const Matrix& upstream_logits,
                         std::span<double> grad) const;

  /// d(upstream . output) / d parameters for a single input.
  std::vector<double> grad(std::span<const double> input,
                           std::span<const double> upstream) const;

 private:
  void check_input_rows(Eigen::Index rows) const;

  std::vector<std::size_t> layer_sizes_;
  Activation activation_ = Activation::kTanh;
  Head head_ = Head::kLinear;
  std::vector<double> params_;
};

/// Column-wise softmax with max subtraction.
Matrix softmax_columns(const Matrix& logits);

/// Scales `grads` in place so their L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
double clip_global_norm(std::span<double> grads, double max_norm);

/// FNV-1a over the raw bytes of a parameter vector; equal iff bit-identical
/// with overwhelming probability.
std::uint64_t parameter_hash(std::span<const double> params);

}  // namespace lia2c::nn
