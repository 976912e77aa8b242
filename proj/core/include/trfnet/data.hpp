#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace trfnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// N samples by V real features, with optional names and labels.
///
/// Two label forms are supported: single-task integer class labels in
/// [0, num_classes), and multi-task binary targets (N x T, NaN marks a missing
/// label). A dataset carries at most one of the two.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Matrix values, std::vector<std::string> feature_names = {},
                   std::vector<int> labels = {}, int num_classes = 0);

  static Dataset with_tasks(Matrix values, Matrix task_targets,
                            std::vector<std::string> feature_names = {});

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  const Matrix& values() const { return values_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  const std::vector<int>& labels() const { return labels_; }
  int num_classes() const { return num_classes_; }
  const Matrix& task_targets() const { return tasks_; }

  bool has_names() const { return !names_.empty(); }
  bool has_labels() const { return !labels_.empty(); }
  bool has_tasks() const { return tasks_.size() > 0; }

  /// Rows at `indices`, in that order; names, labels and class count carry over.
  Dataset subset(const std::vector<Eigen::Index>& indices) const;

  /// Same labels and names, different feature matrix (row count must match).
  Dataset with_values(Matrix values, std::vector<std::string> names = {}) const;

 private:
  void validate() const;

  Matrix values_;
  std::vector<std::string> names_;
  std::vector<int> labels_;
  int num_classes_ = 0;
  Matrix tasks_;
};

class DiscretizationPolicy {
 public:
  enum class Kind { median_threshold, fixed_threshold, already_binary };

  static DiscretizationPolicy median() { return DiscretizationPolicy(Kind::median_threshold, 0.0); }
  static DiscretizationPolicy fixed(double threshold);
  static DiscretizationPolicy already_binary() { return DiscretizationPolicy(Kind::already_binary, 0.0); }

  /// already-binary for {0,1} data, fixed(0) for nonnegative integer counts,
  /// median-threshold otherwise.
  static DiscretizationPolicy automatic(const Dataset& d);

  /// Parses "median", "binary" or "fixed:<t>".
  static DiscretizationPolicy parse(const std::string& text);

  Kind kind() const { return kind_; }
  double threshold() const { return threshold_; }
  std::string to_string() const;

  friend bool operator==(const DiscretizationPolicy&, const DiscretizationPolicy&) = default;

 private:
  DiscretizationPolicy(Kind kind, double threshold) : kind_(kind), threshold_(threshold) {}
  Kind kind_;
  double threshold_;
};

/// N x V matrix of exact 0/1 entries.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  BinaryDataset(BitMatrix values, std::string origin);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  const BitMatrix& values() const { return values_; }
  const std::string& origin() const { return origin_; }

  /// The same matrix as doubles, e.g. to feed it back as a Dataset.
  Matrix as_real() const { return values_.cast<double>(); }

 private:
  BitMatrix values_;
  std::string origin_;
};

/// Median of a column: midpoint of the two central order statistics for even N.
double column_median(const Eigen::Ref<const Vector>& column);

/// Entry -> 1 iff value > threshold (strict). The source dataset is untouched.
BinaryDataset discretize(const Dataset& d, const DiscretizationPolicy& p);

struct Split {
  Dataset train;
  std::optional<Dataset> valid;
  Dataset test;
  std::vector<Eigen::Index> train_rows, valid_rows, test_rows;
};

/// Seeded shuffle then floor(N*frac) rows for train and valid; the rest is test.
Split split(const Dataset& d, double train_frac, double valid_frac, std::uint64_t seed);

Dataset read_dense_csv(std::istream& in, bool has_labels);
Dataset load_dense_csv(const std::filesystem::path& path, bool has_labels);
/// The last `tasks` columns hold 0/1 targets; empty or "nan" cells are missing.
Dataset read_dense_csv_tasks(std::istream& in, int tasks);
Dataset load_dense_csv_tasks(const std::filesystem::path& path, int tasks);
void write_dense_csv(const Dataset& d, std::ostream& out);
void save_dense_csv(const Dataset& d, const std::filesystem::path& path);

Dataset read_sparse_bow(std::istream& docs, std::istream& vocab);
Dataset load_sparse_bow(const std::filesystem::path& doc_path,
                        const std::filesystem::path& vocab_path);
void write_sparse_bow(const Dataset& d, std::ostream& docs, std::ostream& vocab);
void save_sparse_bow(const Dataset& d, const std::filesystem::path& doc_path,
                     const std::filesystem::path& vocab_path);

}  // namespace trfnet
