#include "trfnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trfnet/error.hpp"

namespace trfnet {

Eigen::Index Network::input_width() const {
  if (!layers.empty()) return layers.front().visible();
  return head ? head->inputs() : 0;
}

Eigen::Index Network::top_width() const {
  if (!layers.empty()) return layers.back().hidden();
  return head ? head->inputs() : 0;
}

void Network::check_chain() const {
  for (std::size_t k = 1; k < layers.size(); ++k) {
    if (layers[k].visible() != layers[k - 1].hidden()) {
      throw ShapeError("layer " + std::to_string(k) + " expects width " +
                       std::to_string(layers[k].visible()) + " but layer " + std::to_string(k - 1) +
                       " emits " + std::to_string(layers[k - 1].hidden()));
    }
  }
  if (head && !layers.empty() && head->inputs() != top_width()) {
    throw ShapeError("head width does not match the top layer");
  }
}

bool Network::masks_hold() const {
  return std::all_of(layers.begin(), layers.end(), [](const MaskedLayer& l) { return l.mask_holds(); });
}

std::vector<Eigen::Index> Network::widths() const {
  std::vector<Eigen::Index> w;
  for (const auto& l : layers) w.push_back(l.hidden());
  return w;
}

Eigen::Index parameter_count(const Network& net) {
  Eigen::Index count = 0;
  for (const auto& l : net.layers) count += l.nnz() + l.hidden();
  if (net.head) count += net.head->weights.size() + net.head->bias.size();
  return count;
}

double sparsity(const Network& net) {
  Eigen::Index nnz = 0;
  Eigen::Index dense = 0;
  for (const auto& l : net.layers) {
    nnz += l.nnz();
    dense += l.hidden() * l.visible();
  }
  return dense == 0 ? 1.0 : static_cast<double>(nnz) / static_cast<double>(dense);
}

double effective_sparsity(const Network& net, double threshold) {
  Eigen::Index kept = 0;
  Eigen::Index dense = 0;
  for (const auto& l : net.layers) {
    kept += (l.masked_weights().array().abs() >= threshold).count();
    dense += l.hidden() * l.visible();
  }
  return dense == 0 ? 1.0 : static_cast<double>(kept) / static_cast<double>(dense);
}

Matrix hidden_forward(const Network& net, const Matrix& x) {
  net.check_chain();
  Matrix a = x;
  for (const auto& l : net.layers) a = masked_forward(l, a);
  return a;
}

Matrix predict_logits(const Network& net, const Matrix& x) {
  if (!net.head) throw ArgumentError("network has no classifier head");
  Matrix logits = hidden_forward(net, x) * net.head->weights.transpose();
  logits.rowwise() += net.head->bias.transpose();
  return logits;
}

namespace {

Matrix sign_of(const Matrix& w) {
  return w.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

}  // namespace

double l1_penalty(const Network& net) {
  double s = 0.0;
  for (const auto& l : net.layers) s += l.masked_weights().lpNorm<1>();
  if (net.head) s += net.head->weights.lpNorm<1>();
  return s;
}

ClassifierGradients classifier_gradients(const Network& net, const Matrix& x, const Targets& y,
                                         double l1_strength,
                                         const std::vector<Matrix>* dropout_masks) {
  if (!net.head) throw ArgumentError("network has no classifier head");
  net.check_chain();
  if (x.cols() != net.input_width()) throw ShapeError("input width does not match the network");
  const std::size_t depth = net.layers.size();
  if (dropout_masks && dropout_masks->size() != depth) {
    throw ShapeError("one dropout mask per hidden layer required");
  }

  // inputs[k] feeds layer k; outputs[k] is layer k's activation before dropout.
  std::vector<Matrix> inputs(depth + 1);
  std::vector<Matrix> outputs(depth);
  std::vector<Matrix> weights(depth);
  inputs[0] = x;
  for (std::size_t k = 0; k < depth; ++k) {
    const auto& l = net.layers[k];
    weights[k] = l.masked_weights();
    Matrix z = inputs[k] * weights[k].transpose();
    z.rowwise() += l.bias_hidden.transpose();
    apply_activation(l.activation, z);
    outputs[k] = std::move(z);
    inputs[k + 1] = dropout_masks ? outputs[k].cwiseProduct((*dropout_masks)[k]) : outputs[k];
  }
  const DenseLayer& head = *net.head;
  Matrix logits = inputs[depth] * head.weights.transpose();
  logits.rowwise() += head.bias.transpose();

  ClassifierGradients g;
  Matrix dlogits;
  if (net.head_kind == HeadKind::softmax) {
    g.loss = softmax_cross_entropy(logits, y.labels);
    dlogits = softmax_cross_entropy_gradient(logits, y.labels);
  } else {
    if (!y.tasks) throw ArgumentError("multi-task head needs task targets");
    g.loss = multitask_cross_entropy(logits, *y.tasks);
    dlogits = multitask_cross_entropy_gradient(logits, *y.tasks);
  }
  if (l1_strength != 0.0) g.loss += l1_strength * l1_penalty(net);

  g.head_weights = dlogits.transpose() * inputs[depth];
  if (l1_strength != 0.0) g.head_weights += l1_strength * sign_of(head.weights);
  g.head_bias = dlogits.colwise().sum().transpose();

  g.weights.resize(depth);
  g.biases.resize(depth);
  Matrix upstream = dlogits * head.weights;
  for (std::size_t k = depth; k-- > 0;) {
    const auto& l = net.layers[k];
    if (dropout_masks) upstream = upstream.cwiseProduct((*dropout_masks)[k]);
    const Matrix dz = upstream.cwiseProduct(activation_derivative(l.activation, outputs[k]));
    g.weights[k] = (dz.transpose() * inputs[k]).cwiseProduct(l.mask);
    if (l1_strength != 0.0) g.weights[k] += l1_strength * sign_of(weights[k]);
    g.biases[k] = dz.colwise().sum().transpose();
    if (k > 0) upstream = dz * weights[k];
  }
  return g;
}

double auc(std::span<const double> scores, std::span<const int> positives) {
  if (scores.size() != positives.size()) throw ShapeError("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double n_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (positives[order[k]]) {
        rank_sum += mid_rank;
        n_pos += 1.0;
      }
    }
    i = j + 1;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double EvalReport::primary_metric() const {
  if (accuracy) return *accuracy;
  if (mean_auc) return *mean_auc;
  return std::numeric_limits<double>::quiet_NaN();
}

EvalReport evaluate(const Network& net, const Dataset& test) {
  if (!net.head) throw ArgumentError("evaluate needs a network with a head");
  EvalReport r;
  r.parameter_count = parameter_count(net);
  r.sparsity = sparsity(net);
  r.widths = net.widths();
  const Matrix logits = predict_logits(net, test.values());

  if (net.head_kind == HeadKind::softmax) {
    if (!test.has_labels()) throw ArgumentError("evaluate needs labeled test data");
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
      Eigen::Index best = 0;
      logits.row(i).maxCoeff(&best);
      if (best == test.labels()[static_cast<std::size_t>(i)]) ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(logits.rows());
  } else {
    if (!test.has_tasks()) throw ArgumentError("evaluate needs task targets for a multi-task head");
    const Matrix& t = test.task_targets();
    double sum = 0.0;
    int counted = 0;
    for (Eigen::Index task = 0; task < t.cols(); ++task) {
      std::vector<double> scores;
      std::vector<int> pos;
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        if (std::isnan(t(i, task))) continue;
        scores.push_back(logits(i, task));
        pos.push_back(t(i, task) == 1.0 ? 1 : 0);
      }
      const double a = auc(scores, pos);
      r.task_auc.push_back(a);
      if (!std::isnan(a)) {
        sum += a;
        ++counted;
      }
    }
    r.mean_auc = counted ? sum / counted : std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace trfnet
