#pragma once

#include <cstdint>
#include <vector>

#include "trfnet/builder.hpp"

namespace trfnet {

struct DenseNetConfig {
  std::vector<Eigen::Index> hidden{256, 128};
  FinetuneHyper train;  // activation, dropout, optimizer, schedule, seed

  void validate() const;
};

struct TrainedModel {
  Network network;
  EvalReport report;  // on the monitored (validation) data
};

/// Fully connected ReLU stack with a softmax head: every mask is all ones.
Network make_dense_network(Eigen::Index inputs, Eigen::Index classes, const DenseNetConfig& cfg);

TrainedModel train_dense(const Dataset& train, const Dataset* valid, const DenseNetConfig& cfg);

/// 0/1 mask keeping the ceil(keep_fraction * size) largest |w|. Ties go to the
/// lower row-major index.
Matrix magnitude_mask(const Matrix& weights, double keep_fraction);

/// Per-layer magnitude pruning of the hidden layers (the head stays dense),
/// then retraining with the new masks enforced.
TrainedModel prune_and_retrain(Network net, double keep_fraction, const Dataset& train,
                               const Dataset* valid, const FinetuneHyper& hyper);

/// Dense training with strength * sum |w| added to the loss. The report
/// carries the fraction of hidden weights with |w| >= 0.001.
TrainedModel train_l1(const Dataset& train, const Dataset* valid, const DenseNetConfig& cfg,
                      double strength);

inline constexpr double kEffectiveWeightThreshold = 1e-3;

}  // namespace trfnet
