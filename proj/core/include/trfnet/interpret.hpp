#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trfnet/network.hpp"

namespace trfnet {

class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  /// Replaces an existing vector for the token. Length must equal dim().
  void add(std::string token, std::vector<double> v);
  const std::vector<double>* find(const std::string& token) const;

 private:
  int dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// First line "count dim", then one line per token: the token and dim numbers.
EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

/// 0 when either side has zero variance.
double pearson(const Vector& x, const Vector& y);
/// 0 when either vector is all zeros.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

struct FeatureCorrelation {
  Eigen::Index feature = 0;
  double correlation = 0.0;
};

struct UnitProfile {
  Eigen::Index unit = 0;
  std::vector<FeatureCorrelation> top;  // by |correlation| descending, ties by feature index
  bool degenerate = false;              // the unit's activation is constant over the data
};

/// Pearson correlation of each raw input column with the top-layer unit's
/// post-activation output (inference mode); the k strongest, at most V.
UnitProfile top_correlated_features(const Network& net, const Dataset& d, Eigen::Index unit, int k);
std::vector<UnitProfile> profile_units(const Network& net, const Dataset& d, int k);

/// Mean cosine over unordered pairs of the unit's top features whose names are
/// both in the table; nullopt when no pair qualifies.
std::optional<double> unit_interpretability(const UnitProfile& p, const std::vector<std::string>& names,
                                            const EmbeddingTable& emb);

/// Mean of unit_interpretability over top-layer units that have a scored pair.
/// Throws NoCoverageError when none has.
double interpretability_score(const Network& net, const Dataset& d, const EmbeddingTable& emb, int k);

}  // namespace trfnet
