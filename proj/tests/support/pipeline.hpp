#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fixture {

struct PipelineStep {
  std::vector<std::string> args;
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

/// Every CLI command on small synthetic data, writing into `dir`. Paths in
/// the arguments are relative to `dir`.
inline std::vector<PipelineStep> run_pipeline(const std::filesystem::path& dir) {
  const auto p = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::string> split{"--train-frac", "0.6", "--valid-frac", "0.2", "--split-seed", "3"};
  const auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const std::vector<std::vector<std::string>> commands{
      {"gen", "blobs", "--samples", "300", "--features", "8", "--classes", "3", "--separation", "5",
       "--seed", "1", "--out", p("blobs.csv")},
      {"gen", "chain", "--variables", "12", "--samples", "300", "--seed", "2", "--out", p("chain.csv")},
      {"gen", "blocks", "--blocks", "3", "--block-size", "4", "--samples", "300", "--seed", "3", "--out",
       p("blocks.csv")},
      {"gen", "corpus", "--documents", "120", "--vocabulary", "400", "--seed", "4", "--out", p("docs.txt"),
       "--vocab-out", p("vocab.txt")},
      {"tree", "--data", p("chain.csv"), "--out", p("chain.dot"), "--mi", p("chain_mi.csv")},
      with({"build", "--data", p("blobs.csv"), "--radius", "1", "--stride", "1", "--depth", "2",
            "--dae-epochs", "3", "--seed", "5", "--out", p("trf.trf"), "--log", p("trf_log.csv")},
           split),
      with({"finetune", "--model", p("trf.trf"), "--data", p("blobs.csv"), "--epochs", "5", "--lr", "0.01",
            "--out", p("trf_ft.trf"), "--report", p("trf.report"), "--history", p("trf_hist.csv")},
           split),
      with({"eval", "--model", p("trf_ft.trf"), "--data", p("blobs.csv"), "--report", p("trf_eval.report")},
           split),
      with({"baseline", "dense", "--data", p("blobs.csv"), "--hidden", "16", "8", "--epochs", "5", "--out",
            p("dense.trf"), "--report", p("dense.report")},
           split),
      with({"baseline", "prune", "--model", p("dense.trf"), "--data", p("blobs.csv"), "--keep", "0.2",
            "--epochs", "5", "--out", p("prune.trf"), "--report", p("prune.report")},
           split),
      with({"baseline", "l1", "--data", p("blobs.csv"), "--hidden", "16", "8", "--strength", "1e-3",
            "--epochs", "5", "--out", p("l1.trf"), "--report", p("l1.report")},
           split),
      with({"build", "--data", p("docs.txt"), "--vocab", p("vocab.txt"), "--depth", "1", "--dae-epochs", "2",
            "--out", p("bow.trf")},
           split),
      with({"finetune", "--model", p("bow.trf"), "--data", p("docs.txt"), "--vocab", p("vocab.txt"),
            "--epochs", "3", "--out", p("bow_ft.trf")},
           split),
      {"inspect", "--model", p("bow_ft.trf"), "--data", p("docs.txt"), "--vocab", p("vocab.txt"), "--top", "4",
       "--out", p("bow_units.txt")},
      {"compare", p("trf.report"), p("dense.report"), p("prune.report"), p("l1.report"), "--out",
       p("table.txt")},
  };
  std::vector<PipelineStep> steps;
  for (const auto& args : commands) {
    PipelineStep s;
    s.args = args;
    std::ostringstream out, err;
    s.exit_code = trfnet::cli::run(args, out, err);
    s.stdout_text = out.str();
    s.stderr_text = err.str();
    steps.push_back(std::move(s));
    if (steps.back().exit_code != 0) break;
  }
  return steps;
}

/// Files the pipeline writes, excluding run manifests (they carry timings).
inline std::vector<std::string> pipeline_artifacts() {
  return {"blobs.csv",   "chain.csv",     "blocks.csv",     "docs.txt",     "vocab.txt",  "chain.dot",
          "chain_mi.csv", "trf.trf",      "trf_log.csv",    "trf_ft.trf",   "trf.report", "trf_hist.csv",
          "trf_eval.report", "dense.trf", "dense.report",   "prune.trf",    "prune.report", "l1.trf",
          "l1.report",   "bow.trf",       "bow_ft.trf",     "bow_units.txt", "table.txt"};
}

}  // namespace fixture
