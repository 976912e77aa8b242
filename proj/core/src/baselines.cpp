#include "trfnet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

void DenseNetConfig::validate() const {
  if (hidden.empty()) throw ArgumentError("a dense network needs at least one hidden layer");
  for (auto w : hidden) {
    if (w < 1) throw ArgumentError("hidden widths must be at least 1");
  }
  train.validate();
}

Network make_dense_network(Eigen::Index inputs, Eigen::Index classes, const DenseNetConfig& cfg) {
  cfg.validate();
  if (inputs < 1) throw ArgumentError("a dense network needs at least one input");
  Network net;
  Rng rng(derive_seed(cfg.train.seed, kStreamInit));
  Eigen::Index width = inputs;
  for (auto h : cfg.hidden) {
    net.layers.push_back(make_masked_layer(Matrix::Ones(h, width), cfg.train.activation, rng));
    width = h;
  }
  attach_head(net, classes, cfg.train.seed);
  return net;
}

namespace {

TrainedModel run(Network net, const Dataset& train, const Dataset* valid, const FinetuneHyper& hyper) {
  FinetuneHyper h = hyper;
  h.init = HiddenInit::keep;
  FinetuneResult r = finetune(std::move(net), train, valid, h);
  return {std::move(r.network), std::move(r.report)};
}

Eigen::Index class_count(const Dataset& train, const Dataset* valid) {
  if (!train.has_labels()) throw ArgumentError("baseline training needs labeled data");
  Eigen::Index c = train.num_classes();
  if (valid && valid->has_labels()) c = std::max<Eigen::Index>(c, valid->num_classes());
  return c;
}

std::vector<std::pair<std::string, std::string>> describe(const char* method, const DenseNetConfig& cfg) {
  std::string widths;
  for (auto w : cfg.hidden) widths += (widths.empty() ? "" : ",") + std::to_string(w);
  return {{"method", method},
          {"hidden", widths},
          {"dropout", detail::format_double(cfg.train.dropout)},
          {"l1", detail::format_double(cfg.train.l1_strength)},
          {"seed", std::to_string(cfg.train.seed)}};
}

}  // namespace

TrainedModel train_dense(const Dataset& train, const Dataset* valid, const DenseNetConfig& cfg) {
  Network net = make_dense_network(train.cols(), class_count(train, valid), cfg);
  net.provenance = describe("dense", cfg);
  TrainedModel m = run(std::move(net), train, valid, cfg.train);
  m.report.name = "dense";
  return m;
}

Matrix magnitude_mask(const Matrix& weights, double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ArgumentError("keep fraction must lie in (0, 1]");
  }
  const Eigen::Index rows = weights.rows();
  const Eigen::Index cols = weights.cols();
  const Eigen::Index n = weights.size();
  // Guard against products like 0.1 * 100 landing just above an integer.
  const auto keep = std::min<Eigen::Index>(
      n, static_cast<Eigen::Index>(std::ceil(keep_fraction * static_cast<double>(n) - 1e-9)));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto at = [&](Eigen::Index flat) { return std::abs(weights(flat / cols, flat % cols)); };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return at(a) > at(b); });
  Matrix mask = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < keep; ++i) {
    const auto flat = order[static_cast<std::size_t>(i)];
    mask(flat / cols, flat % cols) = 1.0;
  }
  return mask;
}

TrainedModel prune_and_retrain(Network net, double keep_fraction, const Dataset& train,
                               const Dataset* valid, const FinetuneHyper& hyper) {
  if (!net.head) throw ArgumentError("pruning needs a trained network with a head");
  for (auto& l : net.layers) {
    l.mask = magnitude_mask(l.masked_weights(), keep_fraction);
    l.apply_mask();
  }
  net.plans.clear();
  net.provenance.emplace_back("pruned_keep", detail::format_double(keep_fraction));
  TrainedModel m = run(std::move(net), train, valid, hyper);
  m.report.name = "pruned";
  return m;
}

TrainedModel train_l1(const Dataset& train, const Dataset* valid, const DenseNetConfig& cfg,
                      double strength) {
  if (!(strength >= 0.0)) throw ArgumentError("L1 strength must be nonnegative");
  DenseNetConfig c = cfg;
  c.train.l1_strength = strength;
  Network net = make_dense_network(train.cols(), class_count(train, valid), c);
  net.provenance = describe("l1", c);
  TrainedModel m = run(std::move(net), train, valid, c.train);
  m.report.name = "l1";
  m.report.effective_sparsity = effective_sparsity(m.network, kEffectiveWeightThreshold);
  return m;
}

}  // namespace trfnet
