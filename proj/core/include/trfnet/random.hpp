#pragma once

#include <cstdint>
#include <random>

namespace trfnet {

using Rng = std::mt19937_64;

/// Independent stream `stream` of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

// Streams used inside one layer build; fixed so models stay reproducible.
enum Stream : std::uint64_t {
  kStreamCenters = 1,
  kStreamInit = 2,
  kStreamShuffle = 3,
  kStreamCorruption = 4,
  kStreamDropout = 5,
  kStreamHead = 6,
};

}  // namespace trfnet
