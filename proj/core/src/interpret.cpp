#include "trfnet/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim) {
  if (dim < 1) throw ArgumentError("embedding dimension must be at least 1");
}

void EmbeddingTable::add(std::string token, std::vector<double> v) {
  if (static_cast<int>(v.size()) != dim_) {
    throw ArgumentError("embedding for '" + token + "' has length " + std::to_string(v.size()) +
                        ", expected " + std::to_string(dim_));
  }
  vectors_[std::move(token)] = std::move(v);
}

const std::vector<double>* EmbeddingTable::find(const std::string& token) const {
  const auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  std::size_t number = 1;
  if (!std::getline(in, line)) throw EmptyInputError("embedding file is empty");
  const auto head = detail::split_ws(line);
  const auto count = head.size() == 2 ? detail::parse_int<long long>(head[0]) : std::nullopt;
  const auto dim = head.size() == 2 ? detail::parse_int<int>(head[1]) : std::nullopt;
  if (!count || !dim || *count < 0 || *dim < 1) throw ParseError("embedding header must be 'count dim'", 1);
  EmbeddingTable table(*dim);
  long long seen = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (static_cast<int>(tokens.size()) != *dim + 1) {
      throw ParseError("embedding line has " + std::to_string(tokens.size() - 1) + " values, expected " +
                           std::to_string(*dim),
                       number);
    }
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(*dim));
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto x = detail::parse_double(tokens[i]);
      if (!x || !std::isfinite(*x)) throw ParseError("embedding value is not a finite number", number);
      v.push_back(*x);
    }
    table.add(std::string(tokens[0]), std::move(v));
    ++seen;
  }
  if (seen != *count) {
    throw ParseError("embedding header promises " + std::to_string(*count) + " vectors, found " +
                         std::to_string(seen),
                     number);
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_embeddings(in);
}

double pearson(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw ShapeError("pearson needs equal-length vectors");
  if (x.size() == 0) return 0.0;
  const Vector xc = x.array() - x.mean();
  const Vector yc = y.array() - y.mean();
  const double sx = xc.norm();
  const double sy = yc.norm();
  if (sx == 0.0 || sy == 0.0 || x.maxCoeff() == x.minCoeff() || y.maxCoeff() == y.minCoeff()) return 0.0;
  return std::clamp(xc.dot(yc) / (sx * sy), -1.0, 1.0);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("cosine needs equal-length vectors");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  // sqrt(a.a * a.a) == a.a exactly, so identical vectors give exactly 1.
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

namespace {

UnitProfile rank(Eigen::Index unit, const Dataset& d, const Vector& activation, int k) {
  UnitProfile p;
  p.unit = unit;
  p.degenerate = activation.size() == 0 || activation.maxCoeff() == activation.minCoeff();
  std::vector<FeatureCorrelation> all;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    all.push_back({j, p.degenerate ? 0.0 : pearson(d.values().col(j), activation)});
  }
  std::stable_sort(all.begin(), all.end(), [](const FeatureCorrelation& a, const FeatureCorrelation& b) {
    return std::abs(a.correlation) > std::abs(b.correlation);
  });
  all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(k)));
  p.top = std::move(all);
  return p;
}

void check_k(int k) {
  if (k < 1) throw ArgumentError("top-k must be at least 1");
}

}  // namespace

UnitProfile top_correlated_features(const Network& net, const Dataset& d, Eigen::Index unit, int k) {
  check_k(k);
  if (unit < 0 || unit >= net.top_width()) {
    throw ArgumentError("unit " + std::to_string(unit) + " is outside the top layer (width " +
                        std::to_string(net.top_width()) + ")");
  }
  const Matrix h = hidden_forward(net, d.values());
  return rank(unit, d, h.col(unit), k);
}

std::vector<UnitProfile> profile_units(const Network& net, const Dataset& d, int k) {
  check_k(k);
  const Matrix h = hidden_forward(net, d.values());
  std::vector<UnitProfile> out;
  for (Eigen::Index u = 0; u < h.cols(); ++u) out.push_back(rank(u, d, h.col(u), k));
  return out;
}

std::optional<double> unit_interpretability(const UnitProfile& p, const std::vector<std::string>& names,
                                            const EmbeddingTable& emb) {
  std::vector<const std::vector<double>*> vecs;
  for (const auto& f : p.top) {
    if (f.feature >= static_cast<Eigen::Index>(names.size())) continue;
    vecs.push_back(emb.find(names[static_cast<std::size_t>(f.feature)]));
  }
  double sum = 0.0;
  long pairs = 0;
  for (std::size_t a = 0; a < vecs.size(); ++a) {
    for (std::size_t b = a + 1; b < vecs.size(); ++b) {
      if (!vecs[a] || !vecs[b]) continue;
      sum += cosine(*vecs[a], *vecs[b]);
      ++pairs;
    }
  }
  if (pairs == 0) return std::nullopt;
  return sum / static_cast<double>(pairs);
}

double interpretability_score(const Network& net, const Dataset& d, const EmbeddingTable& emb, int k) {
  if (k < 2) throw ArgumentError("interpretability needs k >= 2");
  if (!d.has_names()) throw ArgumentError("interpretability needs feature names");
  double sum = 0.0;
  long units = 0;
  for (const auto& p : profile_units(net, d, k)) {
    if (const auto s = unit_interpretability(p, d.feature_names(), emb)) {
      sum += *s;
      ++units;
    }
  }
  if (units == 0) throw NoCoverageError("no top-layer unit has a pair of top features in the embedding table");
  return sum / static_cast<double>(units);
}

}  // namespace trfnet
