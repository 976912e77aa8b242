#pragma once

// Independent reference computations used to check the library. None of
// these call into trfnet; they work from first principles on plain types.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Edge = std::pair<int, int>;

/// Labeled tree on n nodes from a Pruefer sequence of length n-2.
std::vector<Edge> prufer_decode(const std::vector<int>& seq, int n);

/// Sum of w(u, v) over the edges in ascending (min, max) order, so equal edge
/// sets give bit-identical totals.
double tree_weight(const Eigen::MatrixXd& w, std::vector<Edge> edges);

/// Maximum tree_weight over all n^(n-2) labeled spanning trees.
double max_spanning_weight_bruteforce(const Eigen::MatrixXd& w);

/// Plug-in MI in nats from a 2x2 table, summed term by term.
double mi_from_table(const std::int64_t n[2][2]);
inline double mi_from_table(const std::array<std::array<std::int64_t, 2>, 2>& n) {
  const std::int64_t raw[2][2] = {{n[0][0], n[0][1]}, {n[1][0], n[1][1]}};
  return mi_from_table(raw);
}

/// All-pairs hop distances of an unweighted graph.
Eigen::MatrixXi floyd_warshall(int n, const std::vector<Edge>& edges);

/// Random labeled tree on n nodes (uniform over Pruefer sequences).
std::vector<Edge> random_tree(int n, std::mt19937_64& rng);

/// Log-likelihood of binary samples (rows) under a tree Bayesian network with
/// empirical marginal at the root and empirical conditionals on every edge.
double tree_log_likelihood(const std::vector<std::vector<int>>& samples, int nodes,
                           const std::vector<Edge>& edges, int root);

/// Central differences of `f` with respect to every entry of `param`.
Eigen::MatrixXd numeric_gradient(const std::function<double()>& f, Eigen::MatrixXd& param,
                                 double step = 1e-5);
Eigen::VectorXd numeric_gradient(const std::function<double()>& f, Eigen::VectorXd& param,
                                 double step = 1e-5);

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor).
double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor = 1e-6);

/// Row-major flat indices of the k largest |w|, ties to the lower index.
std::vector<std::int64_t> top_k_by_magnitude(const Eigen::MatrixXd& w, std::int64_t k);

}  // namespace oracle
