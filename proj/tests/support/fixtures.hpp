#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trfnet/data.hpp"
#include "trfnet/tree.hpp"

namespace fixture {

inline trfnet::ChowLiuTree tree_from(int n, const std::vector<oracle::Edge>& edges) {
  std::vector<trfnet::TreeEdge> te;
  for (const auto& [u, v] : edges) te.push_back({std::min(u, v), std::max(u, v), 1.0});
  return trfnet::ChowLiuTree(n, te);
}

inline trfnet::ChowLiuTree path(int n) {
  std::vector<oracle::Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return tree_from(n, e);
}

inline trfnet::ChowLiuTree star(int leaves) {
  std::vector<oracle::Edge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return tree_from(leaves + 1, e);
}

inline trfnet::BinaryDataset binary(const std::vector<std::vector<int>>& rows) {
  trfnet::BitMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<std::uint8_t>(rows[i][j]);
    }
  }
  return trfnet::BinaryDataset(m, "fixture");
}

inline std::vector<std::vector<int>> random_bits(int n, int v, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution b(p);
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(v)));
  for (auto& r : rows) {
    for (auto& x : r) x = b(rng) ? 1 : 0;
  }
  return rows;
}

/// A scratch directory removed when the object goes out of scope.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("trfnet-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace fixture
