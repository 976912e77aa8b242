#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trfnet/nn.hpp"
#include "trfnet/receptive_field.hpp"

namespace trfnet {

enum class HeadKind : std::uint8_t {
  softmax,    // one label in [0, C)
  multitask,  // C independent binary tasks, missing targets skipped
};

/// A stack of masked layers with an optional classifier head. TRF-nets carry a
/// receptive-field plan per layer; dense and pruned baselines carry none.
struct Network {
  std::vector<MaskedLayer> layers;
  std::vector<ReceptiveFieldPlan> plans;
  std::optional<DenseLayer> head;
  HeadKind head_kind = HeadKind::softmax;
  std::vector<std::pair<std::string, std::string>> provenance;

  Eigen::Index input_width() const;
  Eigen::Index top_width() const;
  /// Throws ShapeError unless layer k's input width equals layer k-1's output.
  void check_chain() const;
  bool masks_hold() const;
  std::vector<Eigen::Index> widths() const;
};

/// Hidden-layer mask nonzeros + hidden biases + head weights and biases.
Eigen::Index parameter_count(const Network& net);
/// sum nnz(A_k) / sum H_k V_k over hidden layers.
double sparsity(const Network& net);
/// Fraction of hidden-layer connections whose weight magnitude is >= threshold.
double effective_sparsity(const Network& net, double threshold = 1e-3);

/// Top hidden-layer activations, inference mode.
Matrix hidden_forward(const Network& net, const Matrix& x);
Matrix predict_logits(const Network& net, const Matrix& x);

/// Training targets for one batch: labels for a softmax head, a task matrix
/// (NaN = missing) for a multi-task head.
struct Targets {
  std::span<const int> labels;
  const Matrix* tasks = nullptr;
};

struct ClassifierGradients {
  double loss = 0.0;
  std::vector<Matrix> weights;  // masked
  std::vector<Vector> biases;
  Matrix head_weights;
  Vector head_bias;
};

/// Loss and exact gradients of the full classifier. `dropout_masks`, when
/// given, holds one inverted-dropout mask per hidden layer. The L1 term
/// strength * sum |w| covers hidden and head weights, not biases; its
/// subgradient at w = 0 is 0.
ClassifierGradients classifier_gradients(const Network& net, const Matrix& x, const Targets& y,
                                         double l1_strength = 0.0,
                                         const std::vector<Matrix>* dropout_masks = nullptr);

double l1_penalty(const Network& net);

/// Mann-Whitney rank statistic with mid-ranks for ties. NaN when a class is absent.
double auc(std::span<const double> scores, std::span<const int> positives);

struct EvalReport {
  std::string name;
  std::optional<double> accuracy;
  std::vector<double> task_auc;
  std::optional<double> mean_auc;
  Eigen::Index parameter_count = 0;
  double sparsity = 1.0;
  std::optional<double> effective_sparsity;
  std::vector<Eigen::Index> widths;
  std::vector<std::pair<std::string, double>> phase_seconds;

  /// accuracy for single-task heads, mean AUC for multi-task heads.
  double primary_metric() const;
};

EvalReport evaluate(const Network& net, const Dataset& test);

}  // namespace trfnet
