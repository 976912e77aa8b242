#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "trfnet/nn.hpp"
#include "trfnet/receptive_field.hpp"

namespace trfnet {

struct CorruptionConfig {
  enum class Kind : std::uint8_t { masking, gaussian_additive };

  Kind kind = Kind::masking;
  double rate = 0.2;  // zeroing probability (masking) or noise std (gaussian)
  std::uint64_t seed = 0;

  void validate() const;

  /// Masking at 0.2 for nonnegative data, additive N(0, 0.2^2) otherwise.
  static CorruptionConfig automatic(const Dataset& d, std::uint64_t seed);
};

std::string to_string(CorruptionConfig::Kind k);
CorruptionConfig::Kind parse_corruption_kind(const std::string& s);

struct DaeHyper {
  int epochs = 30;
  int batch_size = 128;
  AdamConfig adam;
  std::optional<LossFamily> family;  // unset: chosen from the data
  std::uint64_t seed = 0;

  void validate() const;
};

/// Bernoulli when every value lies in [0, 1], Gaussian otherwise.
LossFamily default_family(const Dataset& d);

struct TwoLayerModel {
  MaskedLayer layer;
  LossFamily family = LossFamily::bernoulli;
  std::vector<double> training_log;  // mean loss per epoch
};

Matrix corrupt(const Matrix& x, const CorruptionConfig& c, Rng& rng);

/// Minibatch Adam on the denoising objective x -> corrupt(x) -> h -> x.
TwoLayerModel train_dae(const ConnectivityMask& mask, const Dataset& d, const CorruptionConfig& c,
                        const DaeHyper& h);

struct Projection {
  Dataset probabilities;  // sigmoid encoder output, width H
  BinaryDataset binary;   // probabilities > 0.5
};

Projection project(const TwoLayerModel& m, const Dataset& d);
Projection project(const MaskedLayer& layer, const Dataset& d);

/// CSV with header "epoch,mean_loss", epochs numbered from 1.
void write_training_log(const TwoLayerModel& m, std::ostream& out);

}  // namespace trfnet
