#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trfnet/dae.hpp"
#include "trfnet/network.hpp"
#include "trfnet/tree.hpp"

namespace trfnet {

struct LayerShape {
  int radius = 3;
  int stride = 3;
  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

/// Structure-learning settings. `shapes` holds either one (radius, stride)
/// pair reused at every depth or exactly `depth` pairs.
struct BuildConfig {
  std::vector<LayerShape> shapes{LayerShape{}};
  int depth = 1;
  double global_fraction = 0.1;
  std::optional<DiscretizationPolicy> discretization;      // unset: DiscretizationPolicy::automatic
  std::optional<CorruptionConfig::Kind> corruption_kind;   // unset: CorruptionConfig::automatic
  double corruption_rate = 0.2;
  DaeHyper dae;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
  LayerShape shape(int layer) const;
  /// master seed + layer index.
  std::uint64_t layer_seed(int layer) const { return seed + static_cast<std::uint64_t>(layer); }
};

struct BuildResult {
  Network network;
  std::vector<ChowLiuTree> trees;
  std::vector<std::vector<double>> dae_logs;
  std::vector<std::pair<std::string, double>> phase_seconds;
};

/// Layer by layer: Chow-Liu tree on the binary view, receptive-field masks,
/// denoising pretraining on the real view, projection. No head.
BuildResult build_trf_net_traced(const Dataset& d, const BuildConfig& cfg);
Network build_trf_net(const Dataset& d, const BuildConfig& cfg);

/// Replaces any existing head with a fresh dense layer top width -> classes.
void attach_head(Network& net, Eigen::Index classes, std::uint64_t seed,
                 HeadKind kind = HeadKind::softmax);

/// What fine-tuning starts from. `automatic` keeps a layer's weights when it is
/// fine-tuned with the activation it was trained with and draws fresh ones
/// otherwise: sigmoid-pretrained weights wrapped in ReLUs grow the activations
/// several-fold per layer.
enum class HiddenInit : std::uint8_t { automatic, keep, reinit };

std::string to_string(HiddenInit i);
HiddenInit parse_hidden_init(const std::string& s);

struct FinetuneHyper {
  int max_epochs = 100;
  int patience = 5;
  int batch_size = 128;
  double dropout = 0.5;
  Activation activation = Activation::relu;
  AdamConfig adam;
  double l1_strength = 0.0;
  HiddenInit init = HiddenInit::automatic;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_metric = 0.0;
};

struct FinetuneResult {
  Network network;             // best-validation snapshot
  EvalReport report;           // evaluated on the validation data
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Backpropagation through the whole stack with masks enforced every step,
/// dropout on hidden layers, and early stopping on validation accuracy (or
/// mean AUC for multi-task heads). Without validation data the training set
/// is monitored instead.
FinetuneResult finetune(Network net, const Dataset& train, const Dataset* valid,
                        const FinetuneHyper& hyper);

std::vector<std::pair<std::string, std::string>> describe(const BuildConfig& cfg);

}  // namespace trfnet
