#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "trfnet/tree.hpp"

namespace trfnet {

/// Tree receptive fields for one layer.
///
/// `fields[i]` is exactly the radius-ball around `centers[i]`. When the center
/// walk leaves nodes outside every ball, each such node is attached to the
/// field whose center is nearest (ties: earliest center) and listed in
/// `extras[i]`, so every input reaches at least one hidden unit.
struct ReceptiveFieldPlan {
  int radius = 0;
  int stride = 1;
  Eigen::Index visible = 0;
  std::vector<Eigen::Index> centers;
  std::vector<std::vector<Eigen::Index>> fields;
  std::vector<std::vector<Eigen::Index>> extras;
  Eigen::Index global_count = 0;

  Eigen::Index hidden_units() const {
    return static_cast<Eigen::Index>(centers.size()) + global_count;
  }

  friend bool operator==(const ReceptiveFieldPlan&, const ReceptiveFieldPlan&) = default;
};

enum class RowKind : std::uint8_t { trf, global };

/// H x V 0/1 matrix; receptive-field rows first (center order), then global rows.
struct ConnectivityMask {
  Matrix a;
  std::vector<RowKind> row_kind;

  Eigen::Index rows() const { return a.rows(); }
  Eigen::Index cols() const { return a.cols(); }
  Eigen::Index nnz() const;
};

/// Greedy covering walk: the first center is drawn uniformly from `seed`; each
/// later center is the lowest-indexed node whose minimum hop distance to the
/// current center set is exactly `stride`. Stops when no such node remains.
std::vector<Eigen::Index> select_centers(const ChowLiuTree& t, int stride, std::uint64_t seed);
std::vector<Eigen::Index> select_centers_from(const ChowLiuTree& t, int stride,
                                              Eigen::Index first);

/// The first center `select_centers` draws for this seed.
Eigen::Index first_center(const ChowLiuTree& t, std::uint64_t seed);

/// Sorted nodes within `radius` hops of `center`.
std::vector<Eigen::Index> extract_field(const ChowLiuTree& t, Eigen::Index center, int radius);

/// round-half-up(fraction * centers), at least 1 when fraction > 0 and centers >= 1.
Eigen::Index global_neuron_count(double global_fraction, Eigen::Index centers);

ReceptiveFieldPlan plan_fields(const ChowLiuTree& t, int radius,
                               std::vector<Eigen::Index> centers, double global_fraction);

ConnectivityMask mask_from_plan(const ReceptiveFieldPlan& plan);

std::pair<ReceptiveFieldPlan, ConnectivityMask> build_masks(const ChowLiuTree& t, int radius,
                                                            int stride, double global_fraction,
                                                            std::uint64_t seed);

/// One line per hidden unit: "center=c r=R members=[...]" or "global".
void write_plan(const ReceptiveFieldPlan& plan, std::ostream& out,
                const std::vector<std::string>& names = {});

}  // namespace trfnet
