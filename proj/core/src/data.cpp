#include "trfnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <unordered_set>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

using detail::format_double;
using detail::parse_double;
using detail::trim;

Dataset::Dataset(Matrix values, std::vector<std::string> feature_names,
                 std::vector<int> labels, int num_classes)
    : values_(std::move(values)),
      names_(std::move(feature_names)),
      labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (!labels_.empty() && num_classes_ == 0) {
    num_classes_ = *std::max_element(labels_.begin(), labels_.end()) + 1;
  }
  validate();
}

Dataset Dataset::with_tasks(Matrix values, Matrix task_targets,
                            std::vector<std::string> feature_names) {
  Dataset d(std::move(values), std::move(feature_names));
  if (task_targets.rows() != d.rows() || task_targets.cols() < 1) {
    throw ArgumentError("task target matrix must have one row per sample");
  }
  for (Eigen::Index i = 0; i < task_targets.size(); ++i) {
    const double t = task_targets.data()[i];
    if (!std::isnan(t) && t != 0.0 && t != 1.0) {
      throw ArgumentError("task targets must be 0, 1 or missing");
    }
  }
  d.tasks_ = std::move(task_targets);
  return d;
}

void Dataset::validate() const {
  if (values_.rows() < 1) throw EmptyInputError("dataset has no samples");
  if (values_.cols() < 2) throw ArgumentError("dataset needs at least 2 features");
  if (!values_.allFinite()) throw ArgumentError("dataset contains non-finite values");
  if (!names_.empty()) {
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
      throw ArgumentError("feature_names has " + std::to_string(names_.size()) +
                          " entries for " + std::to_string(values_.cols()) + " features");
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
      if (!seen.insert(n).second) throw ArgumentError("duplicate feature name '" + n + "'");
    }
  }
  if (!labels_.empty()) {
    if (static_cast<Eigen::Index>(labels_.size()) != values_.rows()) {
      throw ArgumentError("labels has " + std::to_string(labels_.size()) + " entries for " +
                          std::to_string(values_.rows()) + " samples");
    }
    for (int l : labels_) {
      if (l < 0 || l >= num_classes_) {
        throw ArgumentError("label " + std::to_string(l) + " outside [0, " +
                            std::to_string(num_classes_) + ")");
      }
    }
  }
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& indices) const {
  Dataset out;
  out.values_ = values_(indices, Eigen::all);
  out.names_ = names_;
  out.num_classes_ = num_classes_;
  if (!labels_.empty()) {
    out.labels_.reserve(indices.size());
    for (auto i : indices) out.labels_.push_back(labels_[static_cast<std::size_t>(i)]);
  }
  if (has_tasks()) out.tasks_ = tasks_(indices, Eigen::all);
  out.validate();
  return out;
}

Dataset Dataset::with_values(Matrix values, std::vector<std::string> names) const {
  if (values.rows() != rows()) throw ShapeError("with_values: row count changed");
  Dataset out;
  out.values_ = std::move(values);
  out.names_ = std::move(names);
  out.labels_ = labels_;
  out.num_classes_ = num_classes_;
  out.tasks_ = tasks_;
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------

DiscretizationPolicy DiscretizationPolicy::fixed(double threshold) {
  if (!std::isfinite(threshold)) {
    throw ArgumentError("fixed-threshold discretization needs a finite threshold");
  }
  return DiscretizationPolicy(Kind::fixed_threshold, threshold);
}

DiscretizationPolicy DiscretizationPolicy::automatic(const Dataset& d) {
  const Matrix& v = d.values();
  bool binary = true;
  bool counts = true;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v.data()[i];
    if (x != 0.0 && x != 1.0) binary = false;
    if (x < 0.0 || x != std::floor(x)) counts = false;
    if (!binary && !counts) break;
  }
  if (binary) return already_binary();
  if (counts) return fixed(0.0);
  return median();
}

DiscretizationPolicy DiscretizationPolicy::parse(const std::string& text) {
  if (text == "median") return median();
  if (text == "binary") return already_binary();
  if (text.rfind("fixed:", 0) == 0) {
    const auto t = parse_double(std::string_view(text).substr(6));
    if (!t) throw ArgumentError("bad fixed threshold in '" + text + "'");
    return fixed(*t);
  }
  throw ArgumentError("unknown discretization policy '" + text + "'");
}

std::string DiscretizationPolicy::to_string() const {
  switch (kind_) {
    case Kind::median_threshold: return "median";
    case Kind::already_binary: return "binary";
    case Kind::fixed_threshold: return "fixed:" + format_double(threshold_);
  }
  return "?";
}

BinaryDataset::BinaryDataset(BitMatrix values, std::string origin)
    : values_(std::move(values)), origin_(std::move(origin)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (values_.data()[i] > 1) throw ArgumentError("binary dataset entry is not 0/1");
  }
}

double column_median(const Eigen::Ref<const Vector>& column) {
  std::vector<double> v(column.data(), column.data() + column.size());
  if (v.empty()) throw ArgumentError("median of an empty column");
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

BinaryDataset discretize(const Dataset& d, const DiscretizationPolicy& p) {
  const Matrix& v = d.values();
  BitMatrix out(v.rows(), v.cols());
  switch (p.kind()) {
    case DiscretizationPolicy::Kind::already_binary:
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
          const double x = v(i, j);
          if (x != 0.0 && x != 1.0) {
            throw PolicyViolationError("already-binary policy but entry (" + std::to_string(i) +
                                       ", " + std::to_string(j) + ") = " + format_double(x));
          }
          out(i, j) = static_cast<std::uint8_t>(x);
        }
      }
      break;
    case DiscretizationPolicy::Kind::fixed_threshold:
      out = (v.array() > p.threshold()).cast<std::uint8_t>();
      break;
    case DiscretizationPolicy::Kind::median_threshold:
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double m = column_median(v.col(j));
        out.col(j) = (v.col(j).array() > m).cast<std::uint8_t>();
      }
      break;
  }
  return BinaryDataset(std::move(out), p.to_string());
}

Split split(const Dataset& d, double train_frac, double valid_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0) || !(valid_frac >= 0.0) || !(train_frac + valid_frac < 1.0)) {
    throw ArgumentError("split fractions must satisfy 0 < train, 0 <= valid, train + valid < 1");
  }
  const Eigen::Index n = d.rows();
  const auto n_train = static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * train_frac));
  const auto n_valid = static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * valid_frac));
  if (n_train < 1) throw ArgumentError("train split would be empty");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  Split s;
  s.train_rows.assign(order.begin(), order.begin() + n_train);
  s.valid_rows.assign(order.begin() + n_train, order.begin() + n_train + n_valid);
  s.test_rows.assign(order.begin() + n_train + n_valid, order.end());
  s.train = d.subset(s.train_rows);
  if (!s.valid_rows.empty()) s.valid = d.subset(s.valid_rows);
  s.test = d.subset(s.test_rows);
  return s;
}

// ---------------------------------------------------------------------------
// Dense CSV

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

// Reads a header plus numeric rows. The trailing `label_cols` cells of each
// row go to `label_cell(row, column, text, line)` instead of the matrix.
template <typename LabelFn>
Matrix read_csv(std::istream& in, std::size_t label_cols, std::vector<std::string>& names,
                LabelFn&& label_cell) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    for (auto cell : detail::split_on(t, ',')) header.emplace_back(trim(cell));
  }
  if (header.empty()) throw EmptyInputError("empty CSV input");
  if (header.size() <= label_cols) throw ParseError("header has no feature columns", line_no);
  const std::size_t value_cols = header.size() - label_cols;

  std::vector<double> flat;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto cells = detail::split_on(t, ',');
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < value_cols; ++c) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("non-numeric cell '" + std::string(trim(cells[c])) + "' in column " +
                             std::to_string(c + 1),
                         line_no);
      }
      flat.push_back(*v);
    }
    for (std::size_t c = value_cols; c < cells.size(); ++c) {
      label_cell(n, c - value_cols, cells[c], line_no);
    }
    ++n;
  }
  if (n == 0) throw EmptyInputError("CSV has a header but no data rows");
  names.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(value_cols));
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(value_cols));
}

}  // namespace

Dataset read_dense_csv(std::istream& in, bool has_labels) {
  std::vector<int> labels;
  std::vector<std::string> names;
  Matrix values = read_csv(in, has_labels ? 1 : 0, names,
                           [&](std::size_t, std::size_t, std::string_view cell, std::size_t line_no) {
                             const auto l = detail::parse_int<int>(cell);
                             if (!l || *l < 0) {
                               throw ParseError("label '" + std::string(trim(cell)) +
                                                    "' is not a class index",
                                                line_no);
                             }
                             labels.push_back(*l);
                           });
  return Dataset(std::move(values), std::move(names), std::move(labels));
}

Dataset load_dense_csv(const std::filesystem::path& path, bool has_labels) {
  auto in = open_or_throw(path);
  return read_dense_csv(in, has_labels);
}

Dataset read_dense_csv_tasks(std::istream& in, int tasks) {
  if (tasks < 1) throw ArgumentError("task count must be positive");
  std::vector<double> targets;
  std::vector<std::string> names;
  Matrix values = read_csv(
      in, static_cast<std::size_t>(tasks), names,
      [&](std::size_t, std::size_t, std::string_view cell, std::size_t line_no) {
        const auto c = trim(cell);
        if (c.empty() || c == "nan" || c == "NaN" || c == "NA") {
          targets.push_back(std::nan(""));
        } else if (c == "0" || c == "1") {
          targets.push_back(c == "1" ? 1.0 : 0.0);
        } else {
          throw ParseError("task target '" + std::string(c) + "' is not 0, 1 or missing", line_no);
        }
      });
  Matrix tm = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      targets.data(), values.rows(), tasks);
  return Dataset::with_tasks(std::move(values), std::move(tm), std::move(names));
}

Dataset load_dense_csv_tasks(const std::filesystem::path& path, int tasks) {
  auto in = open_or_throw(path);
  return read_dense_csv_tasks(in, tasks);
}

void write_dense_csv(const Dataset& d, std::ostream& out) {
  const Eigen::Index v = d.cols();
  for (Eigen::Index j = 0; j < v; ++j) {
    if (j) out << ',';
    out << (d.has_names() ? d.feature_names()[static_cast<std::size_t>(j)] : "f" + std::to_string(j));
  }
  if (d.has_labels()) out << ",label";
  for (Eigen::Index t = 0; t < d.task_targets().cols(); ++t) out << ",task" << t;
  out << '\n';
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < v; ++j) {
      if (j) out << ',';
      out << format_double(d.values()(i, j));
    }
    if (d.has_labels()) out << ',' << d.labels()[static_cast<std::size_t>(i)];
    for (Eigen::Index t = 0; t < d.task_targets().cols(); ++t) {
      const double x = d.task_targets()(i, t);
      out << ',';
      if (!std::isnan(x)) out << (x == 1.0 ? '1' : '0');
    }
    out << '\n';
  }
}

void save_dense_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_dense_csv(d, out);
}

// ---------------------------------------------------------------------------
// Sparse bag-of-words

Dataset read_sparse_bow(std::istream& docs, std::istream& vocab) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(vocab, line)) {
    const auto t = trim(line);
    if (!t.empty()) tokens.emplace_back(t);
  }
  const auto v = static_cast<Eigen::Index>(tokens.size());
  if (v == 0) throw EmptyInputError("vocabulary is empty");

  std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
  std::vector<int> labels;
  std::size_t line_no = 0;
  while (std::getline(docs, line)) {
    ++line_no;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    const auto label = detail::parse_int<int>(fields[0]);
    if (!label || *label < 0) {
      throw ParseError("label '" + std::string(fields[0]) + "' is not a class index", line_no);
    }
    std::vector<std::pair<Eigen::Index, double>> entries;
    std::set<Eigen::Index> seen;
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const auto colon = fields[f].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("token '" + std::string(fields[f]) + "' is not idx:count", line_no);
      }
      const auto idx = detail::parse_int<long long>(fields[f].substr(0, colon));
      const auto count = detail::parse_int<long long>(fields[f].substr(colon + 1));
      if (!idx || !count || *idx < 0 || *count < 1) {
        throw ParseError("token '" + std::string(fields[f]) + "' is not idx:count", line_no);
      }
      if (*idx >= v) {
        throw IndexError("index " + std::to_string(*idx) + " >= vocabulary size " +
                             std::to_string(v),
                         line_no);
      }
      if (!seen.insert(*idx).second) {
        throw DuplicateIndexError("index " + std::to_string(*idx) + " repeated", line_no);
      }
      entries.emplace_back(static_cast<Eigen::Index>(*idx), static_cast<double>(*count));
    }
    labels.push_back(*label);
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw EmptyInputError("document file has no documents");

  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), v);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, c] : rows[i]) m(static_cast<Eigen::Index>(i), j) = c;
  }
  return Dataset(std::move(m), std::move(tokens), std::move(labels));
}

Dataset load_sparse_bow(const std::filesystem::path& doc_path,
                        const std::filesystem::path& vocab_path) {
  auto docs = open_or_throw(doc_path);
  auto vocab = open_or_throw(vocab_path);
  return read_sparse_bow(docs, vocab);
}

void write_sparse_bow(const Dataset& d, std::ostream& docs, std::ostream& vocab) {
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    vocab << (d.has_names() ? d.feature_names()[static_cast<std::size_t>(j)] : "w" + std::to_string(j))
          << '\n';
  }
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    docs << (d.has_labels() ? d.labels()[static_cast<std::size_t>(i)] : 0);
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      const double c = d.values()(i, j);
      if (c != 0.0) {
        if (c < 1.0 || c != std::floor(c)) {
          throw ArgumentError("bag-of-words export needs nonnegative integer counts");
        }
        docs << ' ' << j << ':' << static_cast<long long>(c);
      }
    }
    docs << '\n';
  }
}

void save_sparse_bow(const Dataset& d, const std::filesystem::path& doc_path,
                     const std::filesystem::path& vocab_path) {
  std::ofstream docs(doc_path);
  std::ofstream vocab(vocab_path);
  if (!docs || !vocab) throw Error("cannot write bag-of-words files");
  write_sparse_bow(d, docs, vocab);
}

}  // namespace trfnet
