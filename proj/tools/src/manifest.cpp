#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "trfnet/error.hpp"

namespace trfnet::cli {

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 unavailable");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char h[3];
    std::snprintf(h, sizeof h, "%02x", md[i]);
    hex += h;
  }
  return hex;
}

void Manifest::timing(std::string phase, double seconds) {
  for (auto& [p, s] : timings_) {
    if (p == phase) {
      s += seconds;
      return;
    }
  }
  timings_.emplace_back(std::move(phase), seconds);
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return output.string() + ".manifest.json";
}

void Manifest::write() const {
  if (outputs_.empty()) return;
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = "trfnet";
  j["version"] = TRFNET_VERSION;
  j["command"] = command_;
  j["argv"] = argv_;
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : flags_) flags[k] = v;
  j["flags"] = flags;
  ordered_json seeds = ordered_json::object();
  for (const auto& [k, v] : seeds_) seeds[k] = v;
  j["seeds"] = seeds;
  auto files = [](const std::vector<std::filesystem::path>& paths) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : paths) {
      arr.push_back({{"path", p.string()},
                     {"bytes", std::filesystem::file_size(p)},
                     {"sha256", file_sha256(p)}});
    }
    return arr;
  };
  j["inputs"] = files(inputs_);
  j["outputs"] = files(outputs_);
  ordered_json timings = ordered_json::object();
  for (const auto& [k, v] : timings_) timings[k] = v;
  j["timings_seconds"] = timings;

  const auto path = manifest_path(outputs_.front());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace trfnet::cli
