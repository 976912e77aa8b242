#include "trfnet/builder.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void add_time(std::vector<std::pair<std::string, double>>& phases, const std::string& name, double s) {
  for (auto& [n, v] : phases) {
    if (n == name) {
      v += s;
      return;
    }
  }
  phases.emplace_back(name, s);
}

}  // namespace

void BuildConfig::validate() const {
  if (depth < 1) throw ArgumentError("depth must be at least 1");
  if (shapes.empty() || (shapes.size() != 1 && static_cast<int>(shapes.size()) != depth)) {
    throw ArgumentError("give one (radius, stride) pair or one per layer");
  }
  for (const auto& s : shapes) {
    if (s.radius < 0) throw ArgumentError("radius must be nonnegative");
    if (s.stride < 1) throw ArgumentError("stride must be at least 1");
  }
  if (!(global_fraction >= 0.0 && global_fraction <= 1.0)) {
    throw ArgumentError("global fraction must lie in [0, 1]");
  }
  dae.validate();
}

LayerShape BuildConfig::shape(int layer) const {
  return shapes.size() == 1 ? shapes.front() : shapes.at(static_cast<std::size_t>(layer));
}

std::vector<std::pair<std::string, std::string>> describe(const BuildConfig& cfg) {
  using detail::format_double;
  std::string radii, strides;
  for (int k = 0; k < cfg.depth; ++k) {
    radii += (k ? "," : "") + std::to_string(cfg.shape(k).radius);
    strides += (k ? "," : "") + std::to_string(cfg.shape(k).stride);
  }
  return {
      {"method", "trf-net"},
      {"depth", std::to_string(cfg.depth)},
      {"radius", radii},
      {"stride", strides},
      {"globals", format_double(cfg.global_fraction)},
      {"discretization", cfg.discretization ? cfg.discretization->to_string() : "auto"},
      {"corruption", cfg.corruption_kind ? to_string(*cfg.corruption_kind) : "auto"},
      {"corruption_rate", format_double(cfg.corruption_rate)},
      {"dae_epochs", std::to_string(cfg.dae.epochs)},
      {"dae_batch", std::to_string(cfg.dae.batch_size)},
      {"dae_step", format_double(cfg.dae.adam.step_size)},
      {"dae_family", cfg.dae.family ? to_string(*cfg.dae.family) : "auto"},
      {"seed", std::to_string(cfg.seed)},
  };
}

BuildResult build_trf_net_traced(const Dataset& d, const BuildConfig& cfg) {
  cfg.validate();
  BuildResult result;
  Network& net = result.network;
  net.provenance = describe(cfg);

  Stopwatch clock;
  Dataset real = d;
  BinaryDataset binary = discretize(d, cfg.discretization.value_or(DiscretizationPolicy::automatic(d)));
  add_time(result.phase_seconds, "discretize", clock.lap());

  for (int k = 0; k < cfg.depth; ++k) {
    const std::uint64_t seed = cfg.layer_seed(k);
    const LayerShape shape = cfg.shape(k);
    if (real.cols() < 2) {
      throw EmptyStructureError("layer " + std::to_string(k) + " has fewer than 2 inputs");
    }

    ChowLiuTree tree = chow_liu(binary, cfg.threads);
    add_time(result.phase_seconds, "tree", clock.lap());

    std::pair<ReceptiveFieldPlan, ConnectivityMask> structure;
    try {
      structure = build_masks(tree, shape.radius, shape.stride, cfg.global_fraction,
                              derive_seed(seed, kStreamCenters));
    } catch (const EmptyStructureError& e) {
      throw EmptyStructureError("layer " + std::to_string(k) + ": " + e.what());
    }
    add_time(result.phase_seconds, "structure", clock.lap());

    CorruptionConfig corruption = CorruptionConfig::automatic(real, derive_seed(seed, kStreamCorruption));
    if (cfg.corruption_kind) corruption.kind = *cfg.corruption_kind;
    corruption.rate = cfg.corruption_rate;
    DaeHyper hyper = cfg.dae;
    hyper.seed = seed;
    if (k > 0) hyper.family = LossFamily::bernoulli;
    TwoLayerModel model = train_dae(structure.second, real, corruption, hyper);
    add_time(result.phase_seconds, "pretrain", clock.lap());

    if (k + 1 < cfg.depth) {
      if (model.layer.hidden() < 2) {
        throw EmptyStructureError("layer " + std::to_string(k) + " collapsed to " +
                                  std::to_string(model.layer.hidden()) +
                                  " unit(s); cannot stack another layer");
      }
      Projection p = project(model, real);
      real = std::move(p.probabilities);
      binary = std::move(p.binary);
      add_time(result.phase_seconds, "project", clock.lap());
    }

    net.layers.push_back(std::move(model.layer));
    net.plans.push_back(std::move(structure.first));
    result.trees.push_back(std::move(tree));
    result.dae_logs.push_back(std::move(model.training_log));
  }
  net.check_chain();
  return result;
}

Network build_trf_net(const Dataset& d, const BuildConfig& cfg) {
  return std::move(build_trf_net_traced(d, cfg).network);
}

void attach_head(Network& net, Eigen::Index classes, std::uint64_t seed, HeadKind kind) {
  if (kind == HeadKind::softmax && classes < 2) throw ArgumentError("a softmax head needs at least 2 classes");
  if (classes < 1) throw ArgumentError("a head needs at least one output");
  if (net.top_width() < 1) throw ArgumentError("network has no layers to attach a head to");
  Rng rng(derive_seed(seed, kStreamHead));
  net.head = make_dense_layer(net.top_width(), classes, rng);
  net.head_kind = kind;
}

std::string to_string(HiddenInit i) {
  switch (i) {
    case HiddenInit::automatic: return "auto";
    case HiddenInit::keep: return "keep";
    case HiddenInit::reinit: return "reinit";
  }
  return "auto";
}

HiddenInit parse_hidden_init(const std::string& s) {
  if (s == "auto") return HiddenInit::automatic;
  if (s == "keep") return HiddenInit::keep;
  if (s == "reinit") return HiddenInit::reinit;
  throw ArgumentError("unknown initialization '" + s + "' (expected auto, keep or reinit)");
}

void FinetuneHyper::validate() const {
  if (max_epochs < 1) throw ArgumentError("max epochs must be at least 1");
  if (patience < 1) throw ArgumentError("patience must be at least 1");
  if (batch_size < 1) throw ArgumentError("batch size must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ArgumentError("dropout rate must lie in [0, 1)");
  if (!(l1_strength >= 0.0)) throw ArgumentError("L1 strength must be nonnegative");
}

namespace {

std::vector<ParamRef> parameter_refs(Network& net, const ClassifierGradients& g) {
  std::vector<ParamRef> refs;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    auto& l = net.layers[k];
    refs.push_back({as_span(l.weights), as_span(g.weights[k]), as_span(l.mask)});
    refs.push_back({as_span(l.bias_hidden), as_span(g.biases[k])});
  }
  refs.push_back({as_span(net.head->weights), as_span(g.head_weights)});
  refs.push_back({as_span(net.head->bias), as_span(g.head_bias)});
  return refs;
}

void check_targets(const Network& net, const Dataset& d) {
  if (net.head_kind == HeadKind::softmax && !d.has_labels()) {
    throw ArgumentError("fine-tuning needs labeled data");
  }
  if (net.head_kind == HeadKind::multitask && !d.has_tasks()) {
    throw ArgumentError("fine-tuning a multi-task head needs task targets");
  }
}

}  // namespace

FinetuneResult finetune(Network net, const Dataset& train, const Dataset* valid,
                        const FinetuneHyper& hyper) {
  hyper.validate();
  if (!net.head) throw ArgumentError("attach a head before fine-tuning");
  check_targets(net, train);
  if (valid) check_targets(net, *valid);
  net.check_chain();

  Rng init_rng(derive_seed(hyper.seed, kStreamInit));
  Rng shuffle_rng(derive_seed(hyper.seed, kStreamShuffle));
  Rng drop_rng(derive_seed(hyper.seed, kStreamDropout));
  for (auto& l : net.layers) {
    const bool fresh = hyper.init == HiddenInit::reinit ||
                       (hyper.init == HiddenInit::automatic && l.activation != hyper.activation);
    if (fresh) {
      const Vector visible = l.bias_visible;
      l = make_masked_layer(l.mask, hyper.activation, init_rng);
      l.bias_visible = visible;
    }
    l.activation = hyper.activation;
  }

  const Dataset& monitor = valid ? *valid : train;
  FinetuneResult result;
  result.network = net;
  double best = -1.0;
  int stale = 0;
  Adam adam(hyper.adam);

  const Eigen::Index n = train.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<int> batch_labels;
  Matrix batch_tasks;

  for (int epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n; start += hyper.batch_size) {
      const Eigen::Index stop = std::min<Eigen::Index>(n, start + hyper.batch_size);
      const std::vector<Eigen::Index> rows(order.begin() + start, order.begin() + stop);
      const Matrix x = train.values()(rows, Eigen::all);
      Targets y;
      if (net.head_kind == HeadKind::softmax) {
        batch_labels.clear();
        for (auto r : rows) batch_labels.push_back(train.labels()[static_cast<std::size_t>(r)]);
        y.labels = batch_labels;
      } else {
        batch_tasks = train.task_targets()(rows, Eigen::all);
        y.tasks = &batch_tasks;
      }
      std::vector<Matrix> masks;
      for (const auto& l : net.layers) {
        masks.push_back(dropout_mask(x.rows(), l.hidden(), hyper.dropout, drop_rng));
      }
      const ClassifierGradients g = classifier_gradients(net, x, y, hyper.l1_strength, &masks);
      const auto refs = parameter_refs(net, g);
      adam.step(refs);
      loss_sum += g.loss * static_cast<double>(stop - start);
    }
    if (!net.masks_hold()) throw NumericError("a masked-out weight became nonzero during fine-tuning");

    const double metric = evaluate(net, monitor).primary_metric();
    result.history.push_back({epoch, loss_sum / static_cast<double>(n), metric});
    if (metric > best) {
      best = metric;
      stale = 0;
      result.network = net;
      result.best_epoch = epoch;
    } else if (++stale >= hyper.patience) {
      break;
    }
  }
  result.report = evaluate(result.network, monitor);
  return result;
}

}  // namespace trfnet
