#include "trfnet/receptive_field.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <random>

#include "trfnet/error.hpp"

namespace trfnet {

Eigen::Index ConnectivityMask::nnz() const {
  return static_cast<Eigen::Index>((a.array() != 0.0).count());
}

namespace {

// Lowers dist[] to the hop distance from `source` wherever that is smaller.
void relax_from(const ChowLiuTree& t, Eigen::Index source, std::vector<int>& dist) {
  std::vector<int> local(dist.size(), -1);
  std::deque<Eigen::Index> queue{source};
  local[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    const int dx = local[static_cast<std::size_t>(x)];
    auto& best = dist[static_cast<std::size_t>(x)];
    // Nodes already closer to another center shield their whole subtree side.
    if (dx >= best && x != source) continue;
    best = dx;
    for (auto y : t.neighbors(x)) {
      if (local[static_cast<std::size_t>(y)] >= 0) continue;
      local[static_cast<std::size_t>(y)] = dx + 1;
      queue.push_back(y);
    }
  }
}

}  // namespace

Eigen::Index first_center(const ChowLiuTree& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(t.node_count()));
}

std::vector<Eigen::Index> select_centers_from(const ChowLiuTree& t, int stride,
                                              Eigen::Index first) {
  if (stride < 1) throw ArgumentError("stride must be at least 1");
  if (first < 0 || first >= t.node_count()) throw ArgumentError("first center out of range");
  std::vector<int> dist(static_cast<std::size_t>(t.node_count()), std::numeric_limits<int>::max());
  std::vector<Eigen::Index> centers{first};
  relax_from(t, first, dist);
  while (true) {
    const auto it = std::find(dist.begin(), dist.end(), stride);
    if (it == dist.end()) break;
    const auto next = static_cast<Eigen::Index>(it - dist.begin());
    centers.push_back(next);
    relax_from(t, next, dist);
  }
  return centers;
}

std::vector<Eigen::Index> select_centers(const ChowLiuTree& t, int stride, std::uint64_t seed) {
  return select_centers_from(t, stride, first_center(t, seed));
}

std::vector<Eigen::Index> extract_field(const ChowLiuTree& t, Eigen::Index center, int radius) {
  if (radius < 0) throw ArgumentError("radius must be nonnegative");
  const auto dist = hop_distances(t, center);
  std::vector<Eigen::Index> field;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] <= radius) field.push_back(static_cast<Eigen::Index>(v));
  }
  return field;
}

Eigen::Index global_neuron_count(double global_fraction, Eigen::Index centers) {
  if (!(global_fraction >= 0.0 && global_fraction <= 1.0)) {
    throw ArgumentError("global fraction must lie in [0, 1]");
  }
  auto g = static_cast<Eigen::Index>(std::floor(global_fraction * static_cast<double>(centers) + 0.5));
  if (global_fraction > 0.0 && centers >= 1) g = std::max<Eigen::Index>(g, 1);
  return g;
}

ReceptiveFieldPlan plan_fields(const ChowLiuTree& t, int radius,
                               std::vector<Eigen::Index> centers, double global_fraction) {
  if (radius < 0) throw ArgumentError("radius must be nonnegative");
  ReceptiveFieldPlan plan;
  plan.radius = radius;
  plan.visible = t.node_count();
  plan.centers = std::move(centers);
  plan.global_count = global_neuron_count(global_fraction, static_cast<Eigen::Index>(plan.centers.size()));

  const auto v = static_cast<std::size_t>(t.node_count());
  std::vector<bool> covered(v, false);
  std::vector<std::vector<int>> dists;
  dists.reserve(plan.centers.size());
  for (auto c : plan.centers) {
    dists.push_back(hop_distances(t, c));
    std::vector<Eigen::Index> field;
    for (std::size_t x = 0; x < v; ++x) {
      if (dists.back()[x] <= radius) {
        field.push_back(static_cast<Eigen::Index>(x));
        covered[x] = true;
      }
    }
    plan.fields.push_back(std::move(field));
  }
  plan.extras.assign(plan.centers.size(), {});
  if (!plan.centers.empty()) {
    for (std::size_t x = 0; x < v; ++x) {
      if (covered[x]) continue;
      std::size_t best = 0;
      for (std::size_t i = 1; i < plan.centers.size(); ++i) {
        const int di = dists[i][x];
        const int db = dists[best][x];
        if (di < db) best = i;
      }
      plan.extras[best].push_back(static_cast<Eigen::Index>(x));
    }
  }
  return plan;
}

ConnectivityMask mask_from_plan(const ReceptiveFieldPlan& plan) {
  const Eigen::Index h = plan.hidden_units();
  if (h == 0) throw EmptyStructureError("receptive-field plan has no hidden units");
  ConnectivityMask mask;
  mask.a = Matrix::Zero(h, plan.visible);
  mask.row_kind.reserve(static_cast<std::size_t>(h));
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < plan.centers.size(); ++i, ++row) {
    for (auto x : plan.fields[i]) mask.a(row, x) = 1.0;
    if (i < plan.extras.size()) {
      for (auto x : plan.extras[i]) mask.a(row, x) = 1.0;
    }
    mask.row_kind.push_back(RowKind::trf);
  }
  for (Eigen::Index g = 0; g < plan.global_count; ++g, ++row) {
    mask.a.row(row).setOnes();
    mask.row_kind.push_back(RowKind::global);
  }
  return mask;
}

std::pair<ReceptiveFieldPlan, ConnectivityMask> build_masks(const ChowLiuTree& t, int radius,
                                                            int stride, double global_fraction,
                                                            std::uint64_t seed) {
  if (radius < 0) throw ArgumentError("radius must be nonnegative");
  if (stride < 1) throw ArgumentError("stride must be at least 1");
  // Validate before the walk so a bad fraction never yields a half-built plan.
  global_neuron_count(global_fraction, 0);
  auto plan = plan_fields(t, radius, select_centers(t, stride, seed), global_fraction);
  plan.stride = stride;
  auto mask = mask_from_plan(plan);
  return {std::move(plan), std::move(mask)};
}

void write_plan(const ReceptiveFieldPlan& plan, std::ostream& out,
                const std::vector<std::string>& names) {
  auto label = [&](Eigen::Index x) {
    return names.empty() ? std::to_string(x) : names[static_cast<std::size_t>(x)];
  };
  for (std::size_t i = 0; i < plan.centers.size(); ++i) {
    std::vector<Eigen::Index> members = plan.fields[i];
    if (i < plan.extras.size()) members.insert(members.end(), plan.extras[i].begin(), plan.extras[i].end());
    std::sort(members.begin(), members.end());
    out << "center=" << label(plan.centers[i]) << " r=" << plan.radius << " members=[";
    for (std::size_t k = 0; k < members.size(); ++k) out << (k ? "," : "") << label(members[k]);
    out << "]\n";
  }
  for (Eigen::Index g = 0; g < plan.global_count; ++g) out << "global\n";
}

}  // namespace trfnet
