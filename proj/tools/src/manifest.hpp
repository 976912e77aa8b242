#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace trfnet::cli {

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

/// Record of one command run, written as JSON next to the primary output.
class Manifest {
 public:
  explicit Manifest(std::vector<std::string> argv) : argv_(std::move(argv)) {}

  void set_command(std::string c) { command_ = std::move(c); }
  void flag(std::string name, std::string value) { flags_.emplace_back(std::move(name), std::move(value)); }
  void seed(std::string name, std::uint64_t value) { seeds_.emplace_back(std::move(name), value); }
  void input(const std::filesystem::path& p) { inputs_.push_back(p); }
  void output(const std::filesystem::path& p) { outputs_.push_back(p); }
  void timing(std::string phase, double seconds);

  const std::vector<std::filesystem::path>& inputs() const { return inputs_; }
  const std::vector<std::filesystem::path>& outputs() const { return outputs_; }

  /// Writes `<first output>.manifest.json`; does nothing for runs without outputs.
  void write() const;

 private:
  std::vector<std::string> argv_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> flags_;
  std::vector<std::pair<std::string, std::uint64_t>> seeds_;
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::vector<std::pair<std::string, double>> timings_;
};

std::filesystem::path manifest_path(const std::filesystem::path& output);

}  // namespace trfnet::cli
