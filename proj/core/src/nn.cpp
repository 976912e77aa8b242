#include "trfnet/nn.hpp"

#include <algorithm>
#include <cmath>

#include "trfnet/error.hpp"

namespace trfnet {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "?";
}

std::string to_string(LossFamily f) {
  return f == LossFamily::bernoulli ? "bernoulli" : "gaussian";
}

Activation parse_activation(const std::string& s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "relu") return Activation::relu;
  if (s == "identity") return Activation::identity;
  throw ArgumentError("unknown activation '" + s + "'");
}

LossFamily parse_loss_family(const std::string& s) {
  if (s == "bernoulli") return LossFamily::bernoulli;
  if (s == "gaussian") return LossFamily::gaussian;
  throw ArgumentError("unknown loss family '" + s + "'");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void apply_activation(Activation a, Matrix& z) {
  switch (a) {
    case Activation::sigmoid: z = z.unaryExpr([](double v) { return sigmoid(v); }); break;
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::identity: break;
  }
}

Matrix activation_derivative(Activation a, const Matrix& output) {
  switch (a) {
    case Activation::sigmoid: return output.array() * (1.0 - output.array());
    case Activation::relu: return (output.array() > 0.0).cast<double>();
    case Activation::identity: return Matrix::Ones(output.rows(), output.cols());
  }
  return {};
}

MaskedLayer make_masked_layer(Matrix mask, Activation activation, Rng& rng) {
  MaskedLayer l;
  const Eigen::Index h = mask.rows();
  const Eigen::Index v = mask.cols();
  l.weights = Matrix::Zero(h, v);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Eigen::Index i = 0; i < h; ++i) {
    const double fan_in = std::max<double>(1.0, static_cast<double>((mask.row(i).array() != 0.0).count()));
    const double bound = std::sqrt(6.0 / (fan_in + static_cast<double>(h)));
    for (Eigen::Index j = 0; j < v; ++j) {
      const double u = unit(rng);
      if (mask(i, j) != 0.0) l.weights(i, j) = bound * u;
    }
  }
  l.mask = std::move(mask);
  l.bias_hidden = Vector::Zero(h);
  l.bias_visible = Vector::Zero(v);
  l.activation = activation;
  return l;
}

DenseLayer make_dense_layer(Eigen::Index inputs, Eigen::Index outputs, Rng& rng) {
  DenseLayer d;
  const double bound = std::sqrt(6.0 / static_cast<double>(inputs + outputs));
  std::uniform_real_distribution<double> unit(-bound, bound);
  d.weights.resize(outputs, inputs);
  for (Eigen::Index i = 0; i < outputs; ++i)
    for (Eigen::Index j = 0; j < inputs; ++j) d.weights(i, j) = unit(rng);
  d.bias = Vector::Zero(outputs);
  return d;
}

Matrix masked_pre_activation(const MaskedLayer& l, const Matrix& x) {
  if (x.cols() != l.visible()) {
    throw ShapeError("layer expects width " + std::to_string(l.visible()) + ", got " +
                     std::to_string(x.cols()));
  }
  Matrix z = x * l.masked_weights().transpose();
  z.rowwise() += l.bias_hidden.transpose();
  return z;
}

Matrix masked_forward(const MaskedLayer& l, const Matrix& x) {
  Matrix z = masked_pre_activation(l, x);
  apply_activation(l.activation, z);
  return z;
}

Matrix decoder_pre_activation(const MaskedLayer& l, const Matrix& h) {
  if (h.cols() != l.hidden()) {
    throw ShapeError("decoder expects width " + std::to_string(l.hidden()) + ", got " +
                     std::to_string(h.cols()));
  }
  Matrix z = h * l.masked_weights();
  z.rowwise() += l.bias_visible.transpose();
  return z;
}

Matrix decoder_forward(const MaskedLayer& l, const Matrix& h, LossFamily family) {
  Matrix z = decoder_pre_activation(l, h);
  if (family == LossFamily::bernoulli) apply_activation(Activation::sigmoid, z);
  return z;
}

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError(std::string(what) + ": shape mismatch");
}

void check_unit_interval(const Matrix& x) {
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any()) {
    throw DomainError("Bernoulli reconstruction needs targets in [0, 1]");
  }
}

// -x z + log(1 + e^z), written so neither exp nor log can overflow.
double logistic_loss(double x, double z) {
  return std::max(z, 0.0) - x * z + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

double reconstruction_loss(const Matrix& x, const Matrix& z, LossFamily family) {
  check_same_shape(x, z, "reconstruction_loss");
  if (x.rows() == 0) throw ShapeError("reconstruction_loss of an empty batch");
  double total = 0.0;
  if (family == LossFamily::bernoulli) {
    check_unit_interval(x);
    total = x.binaryExpr(z, [](double xv, double zv) { return logistic_loss(xv, zv); }).sum();
  } else {
    total = 0.5 * (x - z).squaredNorm();
  }
  return total / static_cast<double>(x.rows());
}

Matrix reconstruction_loss_gradient(const Matrix& x, const Matrix& z, LossFamily family) {
  check_same_shape(x, z, "reconstruction_loss_gradient");
  const double scale = 1.0 / static_cast<double>(x.rows());
  if (family == LossFamily::bernoulli) {
    check_unit_interval(x);
    return (z.unaryExpr([](double v) { return sigmoid(v); }) - x) * scale;
  }
  return (z - x) * scale;
}

DaeGradients dae_gradients(const MaskedLayer& l, const Matrix& clean, const Matrix& corrupted,
                           LossFamily family) {
  check_same_shape(clean, corrupted, "dae_gradients");
  const Matrix w = l.masked_weights();
  Matrix pre = corrupted * w.transpose();
  pre.rowwise() += l.bias_hidden.transpose();
  Matrix h = pre;
  apply_activation(Activation::sigmoid, h);
  Matrix z = h * w;
  z.rowwise() += l.bias_visible.transpose();

  DaeGradients g;
  g.loss = reconstruction_loss(clean, z, family);
  const Matrix dz = reconstruction_loss_gradient(clean, z, family);
  g.bias_visible = dz.colwise().sum().transpose();
  const Matrix dpre = (dz * w.transpose()).cwiseProduct(activation_derivative(Activation::sigmoid, h));
  g.bias_hidden = dpre.colwise().sum().transpose();
  g.weights = (h.transpose() * dz + dpre.transpose() * corrupted).cwiseProduct(l.mask);
  return g;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

namespace {

void check_labels(const Matrix& logits, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != logits.rows()) {
    throw ShapeError("one label per logit row required");
  }
  for (int y : labels) {
    if (y < 0 || y >= logits.cols()) throw ArgumentError("label outside the head's classes");
  }
}

}  // namespace

double softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    total += lse - logits(i, labels[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(logits.rows());
}

Matrix softmax_cross_entropy_gradient(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  Matrix g = softmax_rows(logits);
  for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
  return g / static_cast<double>(logits.rows());
}

double multitask_cross_entropy(const Matrix& logits, const Matrix& targets) {
  check_same_shape(logits, targets, "multitask_cross_entropy");
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    for (Eigen::Index t = 0; t < logits.cols(); ++t)
      if (!std::isnan(targets(i, t))) total += logistic_loss(targets(i, t), logits(i, t));
  return total / static_cast<double>(logits.rows());
}

Matrix multitask_cross_entropy_gradient(const Matrix& logits, const Matrix& targets) {
  check_same_shape(logits, targets, "multitask_cross_entropy_gradient");
  Matrix g = Matrix::Zero(logits.rows(), logits.cols());
  const double scale = 1.0 / static_cast<double>(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    for (Eigen::Index t = 0; t < logits.cols(); ++t)
      if (!std::isnan(targets(i, t))) g(i, t) = (sigmoid(logits(i, t)) - targets(i, t)) * scale;
  return g;
}

void Adam::step(std::span<const ParamRef> params) {
  for (const auto& p : params) {
    if (p.grad.size() != p.value.size() || (!p.mask.empty() && p.mask.size() != p.value.size())) {
      throw ShapeError("Adam: gradient/mask shape does not match parameter");
    }
    for (double g : p.grad) {
      if (!std::isfinite(g)) throw NumericError("Adam: non-finite gradient, step aborted");
    }
  }
  if (first_.empty()) {
    for (const auto& p : params) {
      first_.emplace_back(p.value.size(), 0.0);
      second_.emplace_back(p.value.size(), 0.0);
    }
  }
  if (first_.size() != params.size()) throw ShapeError("Adam: parameter list changed");
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (first_[k].size() != params[k].value.size()) throw ShapeError("Adam: parameter shape changed");
  }

  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& p = params[k];
    auto& m = first_[k];
    auto& v = second_[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p.value[i] -= config_.step_size * mhat / (std::sqrt(vhat) + config_.epsilon);
      if (!p.mask.empty() && p.mask[i] == 0.0) p.value[i] = 0.0;
    }
  }
}

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ArgumentError("dropout rate must lie in [0, 1)");
  Matrix m(rows, cols);
  if (rate == 0.0) {
    m.setOnes();
    return m;
  }
  const double keep = 1.0 / (1.0 - rate);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unit(rng) < rate ? 0.0 : keep;
  return m;
}

Matrix dropout(const Matrix& x, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ArgumentError("dropout rate must lie in [0, 1)");
  if (!training || rate == 0.0) return x;
  return x.cwiseProduct(dropout_mask(x.rows(), x.cols(), rate, rng));
}

}  // namespace trfnet
