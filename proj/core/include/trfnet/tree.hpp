#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trfnet/data.hpp"
#include "trfnet/stats.hpp"

namespace trfnet {

struct TreeEdge {
  Eigen::Index u = 0;  // u < v
  Eigen::Index v = 0;
  double weight = 0.0;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Undirected spanning tree over V nodes, rooted for the parent array.
class ChowLiuTree {
 public:
  static constexpr Eigen::Index no_parent = -1;

  /// Validates that `edges` span `nodes` without cycles; orients from `root`.
  ChowLiuTree(Eigen::Index nodes, std::vector<TreeEdge> edges, Eigen::Index root = 0);

  Eigen::Index node_count() const { return nodes_; }
  Eigen::Index root() const { return root_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<Eigen::Index>& parent() const { return parent_; }
  const std::vector<Eigen::Index>& neighbors(Eigen::Index node) const {
    return adjacency_[static_cast<std::size_t>(node)];
  }
  bool has_edge(Eigen::Index a, Eigen::Index b) const;
  double total_weight() const;

 private:
  Eigen::Index nodes_;
  Eigen::Index root_;
  std::vector<TreeEdge> edges_;
  std::vector<Eigen::Index> parent_;
  std::vector<std::vector<Eigen::Index>> adjacency_;
};

/// MI values at or below this are treated as exactly zero before sorting.
inline constexpr double kMiNoiseFloor = 1e-12;

/// Kruskal over all pairs, edges ordered by weight descending then (u, v)
/// ascending. Rooted at node 0.
ChowLiuTree max_spanning_tree(const MiMatrix& m);

/// max_spanning_tree(mi_matrix(discretize(d, p))).
ChowLiuTree chow_liu(const Dataset& d, const DiscretizationPolicy& p, unsigned threads = 1);
ChowLiuTree chow_liu(const BinaryDataset& d, unsigned threads = 1);

/// Breadth-first hop counts from `source`.
std::vector<int> hop_distances(const ChowLiuTree& t, Eigen::Index source);

/// N * ( sum_t sum_k p(x_t=k) ln p(x_t=k) + sum_{(s,t) in tree} I(x_s, x_t) ),
/// the log-likelihood of the data under the tree at its empirical CPTs.
double max_log_likelihood(const ChowLiuTree& t, const BinaryDataset& d);

/// Graphviz export; edge labels carry the MI to 4 decimals.
void write_dot(const ChowLiuTree& t, std::ostream& out,
               const std::vector<std::string>& names = {});

}  // namespace trfnet
