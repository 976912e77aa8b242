#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trfnet/data.hpp"
#include "trfnet/random.hpp"

namespace trfnet {

enum class Activation : std::uint8_t { sigmoid, relu, identity };
enum class LossFamily : std::uint8_t { bernoulli, gaussian };

std::string to_string(Activation a);
std::string to_string(LossFamily f);
Activation parse_activation(const std::string& s);
LossFamily parse_loss_family(const std::string& s);

double sigmoid(double z);
void apply_activation(Activation a, Matrix& z);
/// Derivative of the activation expressed through its output.
Matrix activation_derivative(Activation a, const Matrix& output);

/// Sparse layer: weights outside the mask are exactly zero at all times.
/// bias_visible is the decoder bias used through the tied transpose.
struct MaskedLayer {
  Matrix mask;     // H x V, entries 0/1
  Matrix weights;  // H x V
  Vector bias_hidden;
  Vector bias_visible;
  Activation activation = Activation::sigmoid;

  Eigen::Index hidden() const { return weights.rows(); }
  Eigen::Index visible() const { return weights.cols(); }
  Eigen::Index nnz() const { return static_cast<Eigen::Index>((mask.array() != 0.0).count()); }
  Matrix masked_weights() const { return mask.cwiseProduct(weights); }
  void apply_mask() { weights = weights.cwiseProduct(mask); }
  bool mask_holds() const { return ((mask.array() == 0.0) && (weights.array() != 0.0)).count() == 0; }
};

/// Glorot-uniform init with each row's fan-in taken from its mask row; biases 0.
MaskedLayer make_masked_layer(Matrix mask, Activation activation, Rng& rng);

/// O x I fully connected layer (the classifier head).
struct DenseLayer {
  Matrix weights;
  Vector bias;
  Eigen::Index outputs() const { return weights.rows(); }
  Eigen::Index inputs() const { return weights.cols(); }
};

DenseLayer make_dense_layer(Eigen::Index inputs, Eigen::Index outputs, Rng& rng);

/// (A o W) x + b_h for a batch with one sample per row.
Matrix masked_pre_activation(const MaskedLayer& l, const Matrix& x);
Matrix masked_forward(const MaskedLayer& l, const Matrix& x);

/// (A o W)^T h + b_v, the decoder's pre-activation.
Matrix decoder_pre_activation(const MaskedLayer& l, const Matrix& h);
/// Bernoulli: sigmoid of the pre-activation. Gaussian: the mean itself.
Matrix decoder_forward(const MaskedLayer& l, const Matrix& h, LossFamily family);

/// Mean over the batch of the per-sample negative log-likelihood, evaluated
/// from the decoder pre-activation `z`: stable logistic cross-entropy for
/// Bernoulli, half squared error for Gaussian.
double reconstruction_loss(const Matrix& x, const Matrix& z, LossFamily family);
/// d loss / d z.
Matrix reconstruction_loss_gradient(const Matrix& x, const Matrix& z, LossFamily family);

struct DaeGradients {
  double loss = 0.0;
  Matrix weights;  // already masked
  Vector bias_hidden;
  Vector bias_visible;
};

/// Loss and exact gradients of clean -> corrupted -> h -> reconstruction for a
/// tied-weight masked autoencoder with sigmoid encoder.
DaeGradients dae_gradients(const MaskedLayer& l, const Matrix& clean, const Matrix& corrupted,
                           LossFamily family);

Matrix softmax_rows(const Matrix& logits);
/// Mean cross-entropy of row-wise softmax against integer labels.
double softmax_cross_entropy(const Matrix& logits, std::span<const int> labels);
Matrix softmax_cross_entropy_gradient(const Matrix& logits, std::span<const int> labels);

/// Per-task logistic loss summed over observed targets (NaN = missing), averaged
/// over the batch.
double multitask_cross_entropy(const Matrix& logits, const Matrix& targets);
Matrix multitask_cross_entropy_gradient(const Matrix& logits, const Matrix& targets);

struct AdamConfig {
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One optimizer slot: parameter values, their gradient and an optional 0/1 mask
/// reapplied after the update.
struct ParamRef {
  std::span<double> value;
  std::span<const double> grad;
  std::span<const double> mask = {};
};

template <typename Derived>
std::span<double> as_span(Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
template <typename Derived>
std::span<const double> as_span(const Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

/// Bias-corrected Adam. Moment buffers are created on the first step and
/// must keep their shapes afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  /// Throws NumericError before touching anything if a gradient is not finite.
  void step(std::span<const ParamRef> params);

  const AdamConfig& config() const { return config_; }
  std::int64_t steps() const { return steps_; }

 private:
  AdamConfig config_;
  std::int64_t steps_ = 0;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
};

/// Inverted dropout: entries 0 with probability `rate`, else 1 / (1 - rate).
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng);
/// Identity when `training` is false or rate is 0.
Matrix dropout(const Matrix& x, double rate, Rng& rng, bool training);

}  // namespace trfnet
