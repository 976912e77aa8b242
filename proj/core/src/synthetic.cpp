#include "trfnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "trfnet/error.hpp"
#include "trfnet/random.hpp"

namespace trfnet::synthetic {

namespace {

std::vector<std::string> numbered(const char* prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Dataset markov_chain(Eigen::Index variables, Eigen::Index samples, double flip, std::uint64_t seed) {
  check_probability(flip, "flip probability");
  if (variables < 2 || samples < 1) throw ArgumentError("chain needs at least 2 variables and 1 sample");
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5), flips(flip);
  Matrix x(samples, variables);
  for (Eigen::Index i = 0; i < samples; ++i) {
    bool v = coin(rng);
    for (Eigen::Index j = 0; j < variables; ++j) {
      if (j > 0 && flips(rng)) v = !v;
      x(i, j) = v ? 1.0 : 0.0;
    }
  }
  return Dataset(std::move(x), numbered("x", variables));
}

Dataset block_dataset(Eigen::Index blocks, Eigen::Index block_size, double correlation,
                      Eigen::Index samples, std::uint64_t seed) {
  if (!(correlation >= 0.0 && correlation <= 1.0)) throw ArgumentError("correlation must lie in [0, 1]");
  if (blocks < 1 || block_size < 1 || blocks * block_size < 2 || samples < 1) {
    throw ArgumentError("block dataset needs at least 2 variables and 1 sample");
  }
  // corr(x_a, x_b) = (1 - 2p)^2 for two noisy copies of one fair bit.
  const double p = (1.0 - std::sqrt(correlation)) / 2.0;
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5), flips(p);
  Matrix x(samples, blocks * block_size);
  for (Eigen::Index i = 0; i < samples; ++i) {
    for (Eigen::Index b = 0; b < blocks; ++b) {
      const bool z = coin(rng);
      for (Eigen::Index m = 0; m < block_size; ++m) x(i, b * block_size + m) = (z != flips(rng)) ? 1.0 : 0.0;
    }
  }
  return Dataset(std::move(x), numbered("x", blocks * block_size));
}

Dataset gaussian_blobs(Eigen::Index samples, Eigen::Index features, int classes, double separation,
                       std::uint64_t seed) {
  if (samples < 1 || features < 2 || classes < 2) {
    throw ArgumentError("blobs need samples, at least 2 features and 2 classes");
  }
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix x(samples, features);
  std::vector<int> labels;
  for (Eigen::Index i = 0; i < samples; ++i) {
    const int c = static_cast<int>(i % classes);
    labels.push_back(c);
    for (Eigen::Index j = 0; j < features; ++j) x(i, j) = noise(rng);
    x(i, c % features) += separation;
  }
  return Dataset(std::move(x), numbered("f", features), std::move(labels), classes);
}

Dataset topic_corpus(const CorpusConfig& cfg) {
  if (cfg.documents < 1 || cfg.classes < 2 || cfg.cluster_size < 2 || cfg.clusters_per_doc < 1) {
    throw ArgumentError("corpus needs documents, 2+ classes, clusters of 2+ words");
  }
  const Eigen::Index clusters = cfg.vocabulary / cfg.cluster_size;
  const Eigen::Index owned = (clusters * 4 / 5) / cfg.classes;  // clusters per class
  if (owned < cfg.clusters_per_doc) throw ArgumentError("vocabulary too small for the cluster layout");
  check_probability(cfg.topical, "topical share");
  check_probability(cfg.confusing, "confusing share");
  check_probability(cfg.topical + cfg.confusing, "topical + confusing share");

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::poisson_distribution<int> length(cfg.mean_length);

  // Zipf weights inside a cluster and over the whole vocabulary.
  std::vector<double> in_cluster, background;
  for (Eigen::Index i = 0; i < cfg.cluster_size; ++i) in_cluster.push_back(1.0 / static_cast<double>(i + 1));
  for (Eigen::Index i = 0; i < cfg.vocabulary; ++i) background.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<Eigen::Index> pick_in_cluster(in_cluster.begin(), in_cluster.end());
  std::discrete_distribution<Eigen::Index> pick_background(background.begin(), background.end());
  // Background ranks are scattered over the vocabulary so frequent words are
  // not all in the first clusters.
  std::vector<Eigen::Index> rank_to_word(static_cast<std::size_t>(cfg.vocabulary));
  for (Eigen::Index i = 0; i < cfg.vocabulary; ++i) rank_to_word[static_cast<std::size_t>(i)] = i;
  std::shuffle(rank_to_word.begin(), rank_to_word.end(), rng);

  std::uniform_int_distribution<Eigen::Index> pick_owned(0, owned - 1);
  std::uniform_int_distribution<int> pick_class(0, cfg.classes - 1);
  auto class_cluster = [&](int c, Eigen::Index k) { return static_cast<Eigen::Index>(c) * owned + k; };

  Matrix x = Matrix::Zero(cfg.documents, cfg.vocabulary);
  std::vector<int> labels;
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index doc = 0; doc < cfg.documents; ++doc) {
    const int c = static_cast<int>(doc % cfg.classes);
    labels.push_back(c);
    chosen.clear();
    while (static_cast<int>(chosen.size()) < cfg.clusters_per_doc) {
      const auto k = class_cluster(c, pick_owned(rng));
      if (std::find(chosen.begin(), chosen.end(), k) == chosen.end()) chosen.push_back(k);
    }
    std::uniform_int_distribution<std::size_t> pick_chosen(0, chosen.size() - 1);
    const int tokens = std::max(5, length(rng));
    for (int t = 0; t < tokens; ++t) {
      const double u = unit(rng);
      Eigen::Index word;
      if (u < cfg.topical) {
        word = chosen[pick_chosen(rng)] * cfg.cluster_size + pick_in_cluster(rng);
      } else if (u < cfg.topical + cfg.confusing) {
        int other = pick_class(rng);
        if (other == c) other = (other + 1) % cfg.classes;
        word = class_cluster(other, pick_owned(rng)) * cfg.cluster_size + pick_in_cluster(rng);
      } else {
        word = rank_to_word[static_cast<std::size_t>(pick_background(rng))];
      }
      x(doc, word) += 1.0;
    }
  }
  std::vector<std::string> names;
  for (Eigen::Index w = 0; w < cfg.vocabulary; ++w) {
    const Eigen::Index k = w / cfg.cluster_size;
    names.push_back("c" + std::to_string(k) + "w" + std::to_string(w % cfg.cluster_size));
  }
  return Dataset(std::move(x), std::move(names), std::move(labels), cfg.classes);
}

}  // namespace trfnet::synthetic
