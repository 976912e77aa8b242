#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "trfnet/network.hpp"

namespace trfnet {

/// Line-oriented record:
///
///   trfnet-report 1
///   name=<text>
///   accuracy=<x>            single-task only
///   task_auc=<x>,<x>,...    multi-task only (nan for tasks without both classes)
///   mean_auc=<x>            multi-task only
///   parameters=<n>
///   sparsity=<x>
///   effective_sparsity=<x>  when measured
///   widths=<n>,<n>,...
///
/// Phase timings are not part of the record so identical runs give identical
/// files; they belong in the run manifest.
void write_report(const EvalReport& r, std::ostream& out);
EvalReport read_report(std::istream& in);
void save_report(const EvalReport& r, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

/// Aligned table, one row per report: name, accuracy (or mean AUC),
/// parameter count, sparsity, effective sparsity.
void write_table(std::span<const EvalReport> reports, std::ostream& out);

}  // namespace trfnet
