#include "trfnet/tree.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>
#include <ostream>

#include "trfnet/error.hpp"

namespace trfnet {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

}  // namespace

ChowLiuTree::ChowLiuTree(Eigen::Index nodes, std::vector<TreeEdge> edges, Eigen::Index root)
    : nodes_(nodes), root_(root), edges_(std::move(edges)) {
  if (nodes_ < 1) throw ArgumentError("tree needs at least one node");
  if (root_ < 0 || root_ >= nodes_) throw ArgumentError("tree root out of range");
  if (static_cast<Eigen::Index>(edges_.size()) != nodes_ - 1) {
    throw ArgumentError("a spanning tree over " + std::to_string(nodes_) + " nodes has " +
                        std::to_string(nodes_ - 1) + " edges, got " +
                        std::to_string(edges_.size()));
  }
  DisjointSets sets(static_cast<std::size_t>(nodes_));
  adjacency_.assign(static_cast<std::size_t>(nodes_), {});
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= nodes_ || e.u == e.v) throw ArgumentError("invalid tree edge");
    if (!(e.weight >= 0.0)) throw ArgumentError("tree edge weights must be nonnegative");
    if (!sets.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) {
      throw ArgumentError("tree edges contain a cycle");
    }
    adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& a : adjacency_) std::sort(a.begin(), a.end());

  parent_.assign(static_cast<std::size_t>(nodes_), no_parent);
  std::vector<bool> seen(static_cast<std::size_t>(nodes_), false);
  std::deque<Eigen::Index> queue{root_};
  seen[static_cast<std::size_t>(root_)] = true;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto y : adjacency_[static_cast<std::size_t>(x)]) {
      if (seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = true;
      parent_[static_cast<std::size_t>(y)] = x;
      queue.push_back(y);
    }
  }
}

bool ChowLiuTree::has_edge(Eigen::Index a, Eigen::Index b) const {
  const auto& n = adjacency_[static_cast<std::size_t>(a)];
  return std::binary_search(n.begin(), n.end(), b);
}

double ChowLiuTree::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges_) w += e.weight;
  return w;
}

ChowLiuTree max_spanning_tree(const MiMatrix& m) {
  const Eigen::Index v = m.size();
  if (v < 2) throw ArgumentError("max_spanning_tree needs at least 2 nodes");

  struct Candidate {
    double weight;
    std::int32_t u, v;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(v * (v - 1) / 2));
  for (Eigen::Index s = 0; s < v; ++s) {
    for (Eigen::Index t = s + 1; t < v; ++t) {
      double w = m.values(s, t);
      if (w <= kMiNoiseFloor) w = 0.0;
      candidates.push_back({w, static_cast<std::int32_t>(s), static_cast<std::int32_t>(t)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  DisjointSets sets(static_cast<std::size_t>(v));
  std::vector<TreeEdge> edges;
  edges.reserve(static_cast<std::size_t>(v - 1));
  for (const auto& c : candidates) {
    if (sets.unite(static_cast<std::size_t>(c.u), static_cast<std::size_t>(c.v))) {
      edges.push_back({c.u, c.v, c.weight});
      if (static_cast<Eigen::Index>(edges.size()) == v - 1) break;
    }
  }
  return ChowLiuTree(v, std::move(edges), 0);
}

ChowLiuTree chow_liu(const BinaryDataset& d, unsigned threads) {
  if (d.cols() < 2) throw ArgumentError("chow_liu needs at least 2 features");
  return max_spanning_tree(mi_matrix(d, threads));
}

ChowLiuTree chow_liu(const Dataset& d, const DiscretizationPolicy& p, unsigned threads) {
  return chow_liu(discretize(d, p), threads);
}

std::vector<int> hop_distances(const ChowLiuTree& t, Eigen::Index source) {
  if (source < 0 || source >= t.node_count()) throw ArgumentError("hop source out of range");
  std::vector<int> dist(static_cast<std::size_t>(t.node_count()), -1);
  std::deque<Eigen::Index> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto y : t.neighbors(x)) {
      auto& dy = dist[static_cast<std::size_t>(y)];
      if (dy >= 0) continue;
      dy = dist[static_cast<std::size_t>(x)] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

double max_log_likelihood(const ChowLiuTree& t, const BinaryDataset& d) {
  if (t.node_count() != d.cols()) throw ShapeError("tree and dataset disagree on V");
  const PackedColumns packed(d);
  double per_sample = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    per_sample -= binary_entropy(packed.ones(j), packed.samples());
  }
  for (const auto& e : t.edges()) per_sample += empirical_mi(packed.counts(e.u, e.v));
  return static_cast<double>(d.rows()) * per_sample;
}

void write_dot(const ChowLiuTree& t, std::ostream& out, const std::vector<std::string>& names) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + '"';
  };
  out << "graph chow_liu {\n";
  for (Eigen::Index i = 0; i < t.node_count(); ++i) {
    const std::string label =
        names.empty() ? std::to_string(i) : names[static_cast<std::size_t>(i)];
    out << "  n" << i << " [label=" << quote(label) << "];\n";
  }
  char buf[32];
  for (const auto& e : t.edges()) {
    std::snprintf(buf, sizeof buf, "%.4f", e.weight);
    out << "  n" << e.u << " -- n" << e.v << " [label=\"" << buf << "\"];\n";
  }
  out << "}\n";
}

}  // namespace trfnet
