#pragma once

#include <filesystem>
#include <iosfwd>

#include "trfnet/network.hpp"

namespace trfnet {

inline constexpr int kModelFormatVersion = 1;

/// Text container:
///
///   trfnet-model 1
///   provenance <n>          then n lines "key=value"
///   layers <k>
///   layer <H> <V> <activation>
///   m <nnz> <col>...        one line per hidden unit: mask columns, ascending
///   w <value>...            one line per hidden unit: weights at those columns
///   bh <value>...           H hidden biases
///   bv <value>...           V visible (decoder) biases
///   plan none | plan <radius> <stride> <visible> <centers> <globals>
///   c <center> <n> <member>... <m> <extra>...   one line per center
///   head none | head <softmax|multitask> <O> <I>
///   r <value>...            O rows of I weights
///   hb <value>...
///   end
///
/// Numbers use the shortest decimal form that reads back to the same double,
/// so load(save(net)) is bit-exact and save is canonical.
void write_model(const Network& net, std::ostream& out);
Network read_model(std::istream& in);

void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

}  // namespace trfnet
