#include "trfnet/dae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

void CorruptionConfig::validate() const {
  if (kind == Kind::masking && !(rate >= 0.0 && rate <= 1.0)) {
    throw ArgumentError("masking corruption rate must lie in [0, 1]");
  }
  if (kind == Kind::gaussian_additive && !(rate >= 0.0 && std::isfinite(rate))) {
    throw ArgumentError("gaussian corruption needs a finite nonnegative std");
  }
}

CorruptionConfig CorruptionConfig::automatic(const Dataset& d, std::uint64_t seed) {
  CorruptionConfig c;
  c.kind = (d.values().array() >= 0.0).all() ? Kind::masking : Kind::gaussian_additive;
  c.rate = 0.2;
  c.seed = seed;
  return c;
}

std::string to_string(CorruptionConfig::Kind k) {
  return k == CorruptionConfig::Kind::masking ? "masking" : "gaussian";
}

CorruptionConfig::Kind parse_corruption_kind(const std::string& s) {
  if (s == "masking") return CorruptionConfig::Kind::masking;
  if (s == "gaussian") return CorruptionConfig::Kind::gaussian_additive;
  throw ArgumentError("unknown corruption kind '" + s + "'");
}

void DaeHyper::validate() const {
  if (epochs < 1) throw ArgumentError("DAE epochs must be at least 1");
  if (batch_size < 1) throw ArgumentError("DAE batch size must be at least 1");
}

LossFamily default_family(const Dataset& d) {
  const auto& v = d.values().array();
  return ((v >= 0.0).all() && (v <= 1.0).all()) ? LossFamily::bernoulli : LossFamily::gaussian;
}

Matrix corrupt(const Matrix& x, const CorruptionConfig& c, Rng& rng) {
  c.validate();
  Matrix out = x;
  if (c.kind == CorruptionConfig::Kind::masking) {
    if (c.rate == 0.0) return out;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (unit(rng) < c.rate) out.data()[i] = 0.0;
    }
  } else {
    if (c.rate == 0.0) return out;
    std::normal_distribution<double> noise(0.0, c.rate);
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += noise(rng);
  }
  return out;
}

TwoLayerModel train_dae(const ConnectivityMask& mask, const Dataset& d, const CorruptionConfig& c,
                        const DaeHyper& h) {
  c.validate();
  h.validate();
  if (mask.cols() != d.cols()) {
    throw ShapeError("mask width " + std::to_string(mask.cols()) + " does not match data width " +
                     std::to_string(d.cols()));
  }
  TwoLayerModel model;
  model.family = h.family.value_or(default_family(d));
  if (model.family == LossFamily::bernoulli && default_family(d) != LossFamily::bernoulli) {
    throw DomainError("Bernoulli reconstruction needs data in [0, 1]");
  }

  Rng init_rng(derive_seed(h.seed, kStreamInit));
  Rng shuffle_rng(derive_seed(h.seed, kStreamShuffle));
  Rng noise_rng(c.seed);
  model.layer = make_masked_layer(mask.a, Activation::sigmoid, init_rng);
  MaskedLayer& layer = model.layer;

  Adam adam(h.adam);
  const Matrix& x = d.values();
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  for (int epoch = 0; epoch < h.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n; start += h.batch_size) {
      const Eigen::Index stop = std::min<Eigen::Index>(n, start + h.batch_size);
      const std::vector<Eigen::Index> rows(order.begin() + start, order.begin() + stop);
      const Matrix clean = x(rows, Eigen::all);
      const Matrix noisy = corrupt(clean, c, noise_rng);
      const DaeGradients g = dae_gradients(layer, clean, noisy, model.family);
      const ParamRef params[] = {
          {as_span(layer.weights), as_span(g.weights), as_span(layer.mask)},
          {as_span(layer.bias_hidden), as_span(g.bias_hidden)},
          {as_span(layer.bias_visible), as_span(g.bias_visible)},
      };
      adam.step(params);
      loss_sum += g.loss * static_cast<double>(stop - start);
    }
    model.training_log.push_back(loss_sum / static_cast<double>(n));
  }
  return model;
}

Projection project(const MaskedLayer& layer, const Dataset& d) {
  Matrix p = masked_pre_activation(layer, d.values());
  apply_activation(Activation::sigmoid, p);
  BitMatrix bits = (p.array() > 0.5).cast<std::uint8_t>();
  return {d.with_values(std::move(p)), BinaryDataset(std::move(bits), "projection")};
}

Projection project(const TwoLayerModel& m, const Dataset& d) { return project(m.layer, d); }

void write_training_log(const TwoLayerModel& m, std::ostream& out) {
  out << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < m.training_log.size(); ++e) {
    out << e + 1 << ',' << detail::format_double(m.training_log[e]) << '\n';
  }
}

}  // namespace trfnet
