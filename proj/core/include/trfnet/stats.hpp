#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trfnet/data.hpp"

namespace trfnet {

/// Joint counts of two binary features: n[j][k] = #samples with x_s=j, x_t=k.
struct ContingencyCounts {
  std::array<std::array<std::int64_t, 2>, 2> n{};
  std::int64_t total = 0;

  std::int64_t row(int j) const { return n[j][0] + n[j][1]; }
  std::int64_t col(int k) const { return n[0][k] + n[1][k]; }
  ContingencyCounts transposed() const;
};

/// Symmetric V x V matrix of pairwise empirical mutual information in nats.
/// The diagonal is 0 by convention.
struct MiMatrix {
  Matrix values;
  Eigen::Index size() const { return values.rows(); }
  double operator()(Eigen::Index s, Eigen::Index t) const { return values(s, t); }
};

/// Binary columns packed 64 samples per word; pair counts reduce to popcounts.
class PackedColumns {
 public:
  explicit PackedColumns(const BinaryDataset& d);

  Eigen::Index samples() const { return samples_; }
  Eigen::Index columns() const { return columns_; }
  std::int64_t ones(Eigen::Index col) const { return ones_[static_cast<std::size_t>(col)]; }
  std::int64_t both(Eigen::Index a, Eigen::Index b) const;
  ContingencyCounts counts(Eigen::Index s, Eigen::Index t) const;

 private:
  Eigen::Index samples_ = 0;
  Eigen::Index columns_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::int64_t> ones_;
};

ContingencyCounts pair_counts(const BinaryDataset& d, Eigen::Index s, Eigen::Index t);

/// Sum over cells of p(j,k) ln(p(j,k) / (p(j) p(k))), with 0 ln 0 = 0.
/// Exactly symmetric under transposition of the table.
double empirical_mi(const ContingencyCounts& c);

/// Empirical entropy (nats) of a binary feature with `ones` of `total` set.
double binary_entropy(std::int64_t ones, std::int64_t total);

/// All-pairs MI. Work is split over pairs; the result does not depend on
/// `threads`.
MiMatrix mi_matrix(const BinaryDataset& d, unsigned threads = 1);

/// V rows by V columns, optional header of feature names.
void write_mi_csv(const MiMatrix& m, std::ostream& out,
                  const std::vector<std::string>& names = {});

}  // namespace trfnet
