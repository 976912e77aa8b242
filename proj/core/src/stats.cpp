#include "trfnet/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <thread>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

ContingencyCounts ContingencyCounts::transposed() const {
  ContingencyCounts t;
  t.total = total;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) t.n[k][j] = n[j][k];
  return t;
}

PackedColumns::PackedColumns(const BinaryDataset& d)
    : samples_(d.rows()),
      columns_(d.cols()),
      words_(static_cast<std::size_t>((d.rows() + 63) / 64)),
      bits_(words_ * static_cast<std::size_t>(d.cols()), 0),
      ones_(static_cast<std::size_t>(d.cols()), 0) {
  const BitMatrix& v = d.values();
  for (Eigen::Index j = 0; j < columns_; ++j) {
    std::uint64_t* col = bits_.data() + words_ * static_cast<std::size_t>(j);
    std::int64_t count = 0;
    for (Eigen::Index i = 0; i < samples_; ++i) {
      if (v(i, j)) {
        col[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
        ++count;
      }
    }
    ones_[static_cast<std::size_t>(j)] = count;
  }
}

std::int64_t PackedColumns::both(Eigen::Index a, Eigen::Index b) const {
  const std::uint64_t* x = bits_.data() + words_ * static_cast<std::size_t>(a);
  const std::uint64_t* y = bits_.data() + words_ * static_cast<std::size_t>(b);
  std::int64_t count = 0;
  for (std::size_t w = 0; w < words_; ++w) count += std::popcount(x[w] & y[w]);
  return count;
}

ContingencyCounts PackedColumns::counts(Eigen::Index s, Eigen::Index t) const {
  const std::int64_t n11 = both(s, t);
  const std::int64_t n1s = ones(s);
  const std::int64_t n1t = ones(t);
  ContingencyCounts c;
  c.total = samples_;
  c.n[1][1] = n11;
  c.n[1][0] = n1s - n11;
  c.n[0][1] = n1t - n11;
  c.n[0][0] = samples_ - n1s - n1t + n11;
  return c;
}

ContingencyCounts pair_counts(const BinaryDataset& d, Eigen::Index s, Eigen::Index t) {
  if (s == t) throw ArgumentError("pair_counts needs two distinct features");
  if (s < 0 || t < 0 || s >= d.cols() || t >= d.cols()) {
    throw ArgumentError("pair_counts feature index out of range");
  }
  ContingencyCounts c;
  c.total = d.rows();
  const BitMatrix& v = d.values();
  for (Eigen::Index i = 0; i < d.rows(); ++i) ++c.n[v(i, s)][v(i, t)];
  return c;
}

namespace {

// (n_jk / N) ln(n_jk N / (n_j n_k)); the product of marginals is formed
// symmetrically so that transposing the table gives bit-identical terms.
double mi_term(std::int64_t njk, std::int64_t nj, std::int64_t nk, std::int64_t total) {
  if (njk == 0) return 0.0;
  const double joint = static_cast<double>(njk);
  const double n = static_cast<double>(total);
  const double marg = static_cast<double>(nj) * static_cast<double>(nk);
  return joint / n * std::log(joint * n / marg);
}

}  // namespace

double empirical_mi(const ContingencyCounts& c) {
  if (c.total < 1) throw ArgumentError("contingency table is empty");
  const auto t00 = mi_term(c.n[0][0], c.row(0), c.col(0), c.total);
  const auto t11 = mi_term(c.n[1][1], c.row(1), c.col(1), c.total);
  const auto t01 = mi_term(c.n[0][1], c.row(0), c.col(1), c.total);
  const auto t10 = mi_term(c.n[1][0], c.row(1), c.col(0), c.total);
  return (t00 + t11) + (t01 + t10);
}

double binary_entropy(std::int64_t ones, std::int64_t total) {
  if (total < 1) throw ArgumentError("entropy of an empty sample");
  double h = 0.0;
  for (const std::int64_t k : {total - ones, ones}) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

MiMatrix mi_matrix(const BinaryDataset& d, unsigned threads) {
  const Eigen::Index v = d.cols();
  if (v < 2) throw ArgumentError("mi_matrix needs at least 2 features");
  const PackedColumns packed(d);
  MiMatrix m{Matrix::Zero(v, v)};

  // Rows are dealt round-robin; every (s, t) cell has exactly one writer.
  auto work = [&](unsigned id, unsigned stride) {
    for (Eigen::Index s = id; s < v; s += stride) {
      for (Eigen::Index t = s + 1; t < v; ++t) {
        const double mi = empirical_mi(packed.counts(s, t));
        m.values(s, t) = mi;
        m.values(t, s) = mi;
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(v)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id, threads);
  }
  return m;
}

void write_mi_csv(const MiMatrix& m, std::ostream& out, const std::vector<std::string>& names) {
  const Eigen::Index v = m.size();
  if (!names.empty()) {
    for (Eigen::Index j = 0; j < v; ++j) out << (j ? "," : "") << names[static_cast<std::size_t>(j)];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < v; ++i) {
    for (Eigen::Index j = 0; j < v; ++j) {
      out << (j ? "," : "") << detail::format_double(m.values(i, j));
    }
    out << '\n';
  }
}

}  // namespace trfnet
