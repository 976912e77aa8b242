#pragma once

#include <cstdint>

#include "trfnet/data.hpp"

namespace trfnet::synthetic {

/// Binary Markov chain x0 -> x1 -> ... -> x{V-1}: x0 ~ Bernoulli(1/2), each
/// later variable copies its predecessor and flips with probability `flip`.
Dataset markov_chain(Eigen::Index variables, Eigen::Index samples, double flip, std::uint64_t seed);

/// `blocks` groups of `block_size` binary variables. Each group shares a fair
/// latent bit; members copy it with a flip probability chosen so that two
/// members of a group have Pearson correlation `correlation`. Groups are
/// independent. Variable j belongs to group j / block_size.
Dataset block_dataset(Eigen::Index blocks, Eigen::Index block_size, double correlation,
                      Eigen::Index samples, std::uint64_t seed);

/// Labeled isotropic Gaussian clusters; class c is centered at
/// `separation` * e_{c mod V}, unit variance.
Dataset gaussian_blobs(Eigen::Index samples, Eigen::Index features, int classes, double separation,
                       std::uint64_t seed);

struct CorpusConfig {
  Eigen::Index documents = 2000;
  Eigen::Index vocabulary = 2000;
  int classes = 4;
  Eigen::Index cluster_size = 20;   // words per co-occurrence cluster
  int clusters_per_doc = 3;
  double mean_length = 80.0;
  double topical = 0.15;            // share of tokens from the document's own clusters
  double confusing = 0.10;          // share from clusters of another class
  std::uint64_t seed = 0;
};

/// Bag-of-words counts for a labeled news-like corpus. The vocabulary is cut
/// into clusters of co-occurring words; 80% of clusters belong to one class
/// each, the rest are shared. Remaining tokens follow a Zipf background.
Dataset topic_corpus(const CorpusConfig& cfg);

}  // namespace trfnet::synthetic
