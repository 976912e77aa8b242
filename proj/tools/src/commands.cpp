#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "trfnet/baselines.hpp"
#include "trfnet/builder.hpp"
#include "trfnet/error.hpp"
#include "trfnet/interpret.hpp"
#include "trfnet/report.hpp"
#include "trfnet/serialize.hpp"
#include "trfnet/stats.hpp"
#include "trfnet/synthetic.hpp"

namespace trfnet::cli {

namespace fs = std::filesystem;

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("TRFNET_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ArgumentError("TRFNET_THREADS must be a positive integer");
  }
  return 1;
}

class Timer {
 public:
  explicit Timer(Manifest& m) : m_(m) {}
  void lap(const std::string& phase) {
    const auto now = std::chrono::steady_clock::now();
    m_.timing(phase, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  Manifest& m_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

bool same_file(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

/// Registers an output, refusing to overwrite any input of the run.
fs::path claim_output(Manifest& m, const std::string& flag, const fs::path& p) {
  for (const auto& in : m.inputs()) {
    if (same_file(in, p)) throw ArgumentError(flag + " " + p.string() + " would overwrite an input file");
  }
  return p;
}

void write_text(Manifest& m, const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
  if (!out) throw Error("failed writing " + p.string());
  m.output(p);
}

template <typename F>
auto with_file(const std::string& flag, const fs::path& p, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(flag + " " + p.string() + ": " + e.what(), e.line());
  } catch (const FormatError& e) {
    throw FormatError(flag + " " + p.string() + ": " + e.what());
  } catch (const EmptyInputError& e) {
    throw EmptyInputError(flag + " " + p.string() + ": " + e.what());
  } catch (const PolicyViolationError& e) {
    throw PolicyViolationError(flag + " " + p.string() + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(flag + " " + p.string() + ": " + e.what());
  }
}

std::string trailing_header(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  const auto comma = line.find_last_of(',');
  std::string last = comma == std::string::npos ? line : line.substr(comma + 1);
  while (!last.empty() && (last.back() == '\r' || last.back() == ' ')) last.pop_back();
  return last;
}

struct DataOptions {
  std::string data;
  std::string vocab;
  int tasks = 0;

  void add(CLI::App* app) {
    app->add_option("--data", data, "Dense CSV (header row; trailing 'label' column optional) or sparse bag-of-words file")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--vocab", vocab, "Vocabulary file; switches --data to the sparse bag-of-words format")
        ->check(CLI::ExistingFile);
    app->add_option("--tasks", tasks, "Number of trailing 0/1 task columns in a CSV (multi-task mode)")
        ->check(CLI::NonNegativeNumber);
  }

  Dataset load(Manifest& m) const {
    m.input(data);
    if (!vocab.empty()) {
      m.input(vocab);
      return with_file("--data/--vocab", data, [&] { return load_sparse_bow(data, vocab); });
    }
    if (tasks > 0) return with_file("--data", data, [&] { return load_dense_csv_tasks(data, tasks); });
    const bool labels = trailing_header(data) == "label";
    return with_file("--data", data, [&] { return load_dense_csv(data, labels); });
  }
};

struct SplitOptions {
  double train = 0.8;
  double valid = 0.1;
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--train-frac", train, "Fraction of rows used for training")->capture_default_str();
    app->add_option("--valid-frac", valid, "Fraction of rows used for validation")->capture_default_str();
    app->add_option("--split-seed", seed, "Seed of the row shuffle before splitting")->capture_default_str();
  }

  Split apply(const Dataset& d, Manifest& m) const {
    m.seed("split", seed);
    try {
      return split(d, train, valid, seed);
    } catch (const ArgumentError& e) {
      throw ArgumentError(std::string("--train-frac/--valid-frac: ") + e.what());
    }
  }
};

struct TrainOptions {
  int epochs = 100;
  int patience = 5;
  int batch = 128;
  double dropout = 0.5;
  double lr = 1e-3;
  std::string activation = "relu";
  double l1 = 0.0;
  std::uint64_t seed = 0;

  void add(CLI::App* app, bool with_l1) {
    app->add_option("--epochs", epochs, "Maximum training epochs")->capture_default_str();
    app->add_option("--patience", patience, "Early-stopping patience in epochs")->capture_default_str();
    app->add_option("--batch", batch, "Minibatch size")->capture_default_str();
    app->add_option("--dropout", dropout, "Dropout rate on hidden layers")->capture_default_str();
    app->add_option("--lr", lr, "Adam step size")->capture_default_str();
    app->add_option("--activation", activation, "Hidden activation")
        ->check(CLI::IsMember({"relu", "sigmoid", "identity"}))
        ->capture_default_str();
    if (with_l1) app->add_option("--l1", l1, "L1 strength on all weights")->capture_default_str();
    app->add_option("--seed", seed, "Seed for initialization, shuffling and dropout")->capture_default_str();
  }

  FinetuneHyper hyper(Manifest& m) const {
    m.seed("train", seed);
    FinetuneHyper h;
    h.max_epochs = epochs;
    h.patience = patience;
    h.batch_size = batch;
    h.dropout = dropout;
    h.adam.step_size = lr;
    h.activation = parse_activation(activation);
    h.l1_strength = l1;
    h.seed = seed;
    return h;
  }
};

void print_table(std::ostream& out, const EvalReport& r) {
  write_table(std::span<const EvalReport>(&r, 1), out);
}

/// The report rows of `d` scored by the network, named.
EvalReport score(const Network& net, const Dataset& d, const std::string& name) {
  EvalReport r = evaluate(net, d);
  r.name = name;
  return r;
}

// ---------------------------------------------------------------------------

Command add_tree(CLI::App& app, Session& s) {
  struct Opts {
    DataOptions data;
    std::string discretize = "auto";
    std::string out;
    std::string mi;
    int top = 20;
    unsigned threads = 1;
  };
  auto o = std::make_shared<Opts>();
  o->threads = default_threads();
  auto* sub = app.add_subcommand("tree", "Learn a Chow-Liu tree and export it as Graphviz DOT");
  o->data.add(sub);
  sub->add_option("--discretize", o->discretize, "auto, median, binary or fixed:<t>")->capture_default_str();
  sub->add_option("--out", o->out, "DOT output path")->required();
  sub->add_option("--mi", o->mi, "Also write the mutual-information matrix as CSV");
  sub->add_option("--top", o->top, "Number of strongest edges to list")->capture_default_str();
  sub->add_option("--threads", o->threads, "Worker threads for the MI matrix (env TRFNET_THREADS)")
      ->capture_default_str();
  return {sub, [o, &s] {
            Timer t(s.manifest);
            const Dataset d = o->data.load(s.manifest);
            const auto policy = o->discretize == "auto" ? DiscretizationPolicy::automatic(d)
                                                        : DiscretizationPolicy::parse(o->discretize);
            const BinaryDataset b = discretize(d, policy);
            t.lap("load");
            const MiMatrix mi = mi_matrix(b, o->threads);
            const ChowLiuTree tree = max_spanning_tree(mi);
            t.lap("tree");
            const auto& names = d.feature_names();
            std::ostringstream dot;
            write_dot(tree, dot, names);
            write_text(s.manifest, claim_output(s.manifest, "--out", o->out), dot.str());
            if (!o->mi.empty()) {
              std::ostringstream csv;
              write_mi_csv(mi, csv, names);
              write_text(s.manifest, claim_output(s.manifest, "--mi", o->mi), csv.str());
            }
            auto edges = tree.edges();
            std::stable_sort(edges.begin(), edges.end(),
                             [](const TreeEdge& a, const TreeEdge& b) { return a.weight > b.weight; });
            auto name = [&](Eigen::Index i) {
              return names.empty() ? std::to_string(i) : names[static_cast<std::size_t>(i)];
            };
            s.out << "nodes=" << tree.node_count() << " edges=" << tree.edges().size()
                  << " total_mi=" << std::setprecision(6) << tree.total_weight() << '\n';
            for (std::size_t i = 0; i < edges.size() && static_cast<int>(i) < o->top; ++i) {
              s.out << name(edges[i].u) << '\t' << name(edges[i].v) << '\t' << std::fixed << std::setprecision(6)
                    << edges[i].weight << std::defaultfloat << '\n';
            }
            s.manifest.flag("resolved_discretization", policy.to_string());
          }};
}

Command add_build(CLI::App& app, Session& s) {
  struct Opts {
    DataOptions data;
    SplitOptions split;
    std::vector<int> radius{3};
    std::vector<int> stride{3};
    int depth = 1;
    double globals = 0.1;
    std::string discretize = "auto";
    std::string corruption = "auto";
    double corruption_rate = 0.2;
    std::string family = "auto";
    int dae_epochs = 30;
    int dae_batch = 128;
    double dae_lr = 1e-3;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;
    std::string log;
  };
  auto o = std::make_shared<Opts>();
  o->threads = default_threads();
  auto* sub = app.add_subcommand("build", "Learn a TRF-net structure and pretrain it layer by layer");
  o->data.add(sub);
  o->split.add(sub);
  sub->add_option("--radius", o->radius, "Receptive-field radius r (one value or one per layer)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--stride", o->stride, "Center stride s (one value or one per layer)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--depth", o->depth, "Number of layers d")->capture_default_str();
  sub->add_option("--globals", o->globals, "Global neurons as a fraction of receptive-field units")
      ->capture_default_str();
  sub->add_option("--discretize", o->discretize, "auto, median, binary or fixed:<t>")->capture_default_str();
  sub->add_option("--corruption", o->corruption, "Denoising corruption")
      ->check(CLI::IsMember({"auto", "masking", "gaussian"}))
      ->capture_default_str();
  sub->add_option("--corruption-rate", o->corruption_rate, "Masking probability or Gaussian noise std")
      ->capture_default_str();
  sub->add_option("--family", o->family, "First-layer reconstruction loss")
      ->check(CLI::IsMember({"auto", "bernoulli", "gaussian"}))
      ->capture_default_str();
  sub->add_option("--dae-epochs", o->dae_epochs, "Pretraining epochs per layer")->capture_default_str();
  sub->add_option("--dae-batch", o->dae_batch, "Pretraining minibatch size")->capture_default_str();
  sub->add_option("--dae-lr", o->dae_lr, "Pretraining Adam step size")->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed; layer k uses seed + k")->capture_default_str();
  sub->add_option("--threads", o->threads, "Worker threads for MI matrices (env TRFNET_THREADS)")
      ->capture_default_str();
  sub->add_option("--out", o->out, "Model output path")->required();
  sub->add_option("--log", o->log, "Write per-layer pretraining losses as CSV");
  return {sub, [o, &s] {
            Timer t(s.manifest);
            const Dataset all = o->data.load(s.manifest);
            const Split parts = o->split.apply(all, s.manifest);
            t.lap("load");

            BuildConfig cfg;
            cfg.depth = o->depth;
            const auto layers = std::max(o->radius.size(), o->stride.size());
            if ((o->radius.size() != 1 && o->radius.size() != layers) ||
                (o->stride.size() != 1 && o->stride.size() != layers)) {
              throw ArgumentError("--radius and --stride must list one value or the same number of values");
            }
            if (layers != 1 && static_cast<int>(layers) != o->depth) {
              throw ArgumentError("--radius/--stride lists must have --depth entries");
            }
            cfg.shapes.clear();
            for (std::size_t k = 0; k < layers; ++k) {
              cfg.shapes.push_back({o->radius[o->radius.size() == 1 ? 0 : k],
                                    o->stride[o->stride.size() == 1 ? 0 : k]});
            }
            cfg.global_fraction = o->globals;
            if (o->discretize != "auto") cfg.discretization = DiscretizationPolicy::parse(o->discretize);
            if (o->corruption != "auto") cfg.corruption_kind = parse_corruption_kind(o->corruption);
            cfg.corruption_rate = o->corruption_rate;
            if (o->family != "auto") cfg.dae.family = parse_loss_family(o->family);
            cfg.dae.epochs = o->dae_epochs;
            cfg.dae.batch_size = o->dae_batch;
            cfg.dae.adam.step_size = o->dae_lr;
            cfg.seed = o->seed;
            cfg.threads = o->threads;
            s.manifest.seed("master", o->seed);

            BuildResult r = build_trf_net_traced(parts.train, cfg);
            for (const auto& [phase, secs] : r.phase_seconds) s.manifest.timing(phase, secs);
            t.lap("build");
            const fs::path out = claim_output(s.manifest, "--out", o->out);
            save_model(r.network, out);
            s.manifest.output(out);
            if (!o->log.empty()) {
              std::ostringstream csv;
              csv << "layer,epoch,mean_loss\n";
              for (std::size_t k = 0; k < r.dae_logs.size(); ++k) {
                for (std::size_t e = 0; e < r.dae_logs[k].size(); ++e) {
                  csv << k << ',' << e + 1 << ',' << r.dae_logs[k][e] << '\n';
                }
              }
              write_text(s.manifest, claim_output(s.manifest, "--log", o->log), csv.str());
            }
            s.out << "layers=" << r.network.layers.size() << " widths=";
            const auto w = r.network.widths();
            for (std::size_t i = 0; i < w.size(); ++i) s.out << (i ? "," : "") << w[i];
            s.out << " sparsity=" << sparsity(r.network) << '\n';
          }};
}

Command add_finetune(CLI::App& app, Session& s) {
  struct Opts {
    DataOptions data;
    SplitOptions split;
    TrainOptions train;
    std::string model;
    std::string out;
    std::string report;
    std::string history;
    std::string name = "trf-net";
    std::string init = "auto";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("finetune", "Attach a classifier head and train the whole network");
  sub->add_option("--model", o->model, "Model built by 'build'")->required()->check(CLI::ExistingFile);
  o->data.add(sub);
  o->split.add(sub);
  o->train.add(sub, true);
  sub->add_option("--init", o->init,
                  "Hidden weights to start from: auto (keep unless the activation changes), keep or reinit")
      ->check(CLI::IsMember({"auto", "keep", "reinit"}))
      ->capture_default_str();
  sub->add_option("--out", o->out, "Fine-tuned model output path")->required();
  sub->add_option("--report", o->report, "Test-split report output path");
  sub->add_option("--history", o->history, "Per-epoch training loss and validation metric as CSV");
  sub->add_option("--name", o->name, "Model name in the report")->capture_default_str();
  return {sub, [o, &s] {
            Timer t(s.manifest);
            s.manifest.input(o->model);
            Network net = with_file("--model", o->model, [&] { return load_model(o->model); });
            const Dataset all = o->data.load(s.manifest);
            const Split parts = o->split.apply(all, s.manifest);
            t.lap("load");
            const HeadKind kind = all.has_tasks() ? HeadKind::multitask : HeadKind::softmax;
            const Eigen::Index classes = all.has_tasks() ? all.task_targets().cols() : all.num_classes();
            if (!all.has_tasks() && !all.has_labels()) {
              throw ArgumentError("--data " + o->data.data + " has no labels to fine-tune on");
            }
            if (!net.head || net.head_kind != kind || net.head->outputs() != classes) {
              attach_head(net, classes, o->train.seed, kind);
            }
            FinetuneHyper h = o->train.hyper(s.manifest);
            h.init = parse_hidden_init(o->init);
            FinetuneResult r = finetune(std::move(net), parts.train, parts.valid ? &*parts.valid : nullptr, h);
            t.lap("finetune");
            const EvalReport rep = score(r.network, parts.test, o->name);
            t.lap("evaluate");
            const fs::path out = claim_output(s.manifest, "--out", o->out);
            save_model(r.network, out);
            s.manifest.output(out);
            if (!o->report.empty()) {
              save_report(rep, claim_output(s.manifest, "--report", o->report));
              s.manifest.output(o->report);
            }
            if (!o->history.empty()) {
              std::ostringstream csv;
              csv << "epoch,train_loss,valid_metric\n";
              for (const auto& e : r.history) csv << e.epoch << ',' << e.train_loss << ',' << e.valid_metric << '\n';
              write_text(s.manifest, claim_output(s.manifest, "--history", o->history), csv.str());
            }
            s.out << "best_epoch=" << r.best_epoch << '\n';
            print_table(s.out, rep);
          }};
}

Command add_eval(CLI::App& app, Session& s) {
  struct Opts {
    DataOptions data;
    SplitOptions split;
    std::string model;
    std::string subset = "test";
    std::string report;
    std::string name;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval", "Score a model with a head on labeled data");
  sub->add_option("--model", o->model, "Model file")->required()->check(CLI::ExistingFile);
  o->data.add(sub);
  o->split.add(sub);
  sub->add_option("--subset", o->subset, "Which split rows to score")
      ->check(CLI::IsMember({"test", "valid", "train", "all"}))
      ->capture_default_str();
  sub->add_option("--report", o->report, "Report output path");
  sub->add_option("--name", o->name, "Model name in the report (default: model file stem)");
  return {sub, [o, &s] {
            s.manifest.input(o->model);
            const Network net = with_file("--model", o->model, [&] { return load_model(o->model); });
            const Dataset all = o->data.load(s.manifest);
            std::optional<Dataset> rows;
            if (o->subset == "all") {
              rows = all;
            } else {
              Split parts = o->split.apply(all, s.manifest);
              if (o->subset == "train") rows = std::move(parts.train);
              if (o->subset == "test") rows = std::move(parts.test);
              if (o->subset == "valid") {
                if (!parts.valid) throw ArgumentError("--subset valid: the validation split is empty");
                rows = std::move(*parts.valid);
              }
            }
            const std::string name = o->name.empty() ? fs::path(o->model).stem().string() : o->name;
            const EvalReport rep = score(net, *rows, name);
            if (!o->report.empty()) {
              save_report(rep, claim_output(s.manifest, "--report", o->report));
              s.manifest.output(o->report);
            }
            print_table(s.out, rep);
          }};
}

Command add_baseline(CLI::App& app, Session& s) {
  struct Opts {
    std::string method;
    DataOptions data;
    SplitOptions split;
    TrainOptions train;
    std::vector<Eigen::Index> hidden{256, 128};
    std::string model;
    double keep = 0.1;
    double strength = 1e-5;
    std::string out;
    std::string report;
    std::string name;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("baseline", "Train a comparison model: dense, prune or l1");
  sub->add_option("method", o->method, "dense | prune | l1")
      ->required()
      ->check(CLI::IsMember({"dense", "prune", "l1"}));
  o->data.add(sub);
  o->split.add(sub);
  o->train.add(sub, false);
  sub->add_option("--hidden", o->hidden, "Hidden widths of the dense network")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--model", o->model, "prune: trained dense model to prune (default: train one first)")
      ->check(CLI::ExistingFile);
  sub->add_option("--keep", o->keep, "prune: fraction of weights kept per layer")->capture_default_str();
  sub->add_option("--strength", o->strength, "l1: regularization strength")->capture_default_str();
  sub->add_option("--out", o->out, "Model output path")->required();
  sub->add_option("--report", o->report, "Test-split report output path");
  sub->add_option("--name", o->name, "Model name in the report (default: the method)");
  return {sub, [o, &s] {
            Timer t(s.manifest);
            const Dataset all = o->data.load(s.manifest);
            const Split parts = o->split.apply(all, s.manifest);
            const Dataset* valid = parts.valid ? &*parts.valid : nullptr;
            t.lap("load");
            DenseNetConfig cfg;
            cfg.hidden = o->hidden;
            cfg.train = o->train.hyper(s.manifest);
            TrainedModel m;
            if (o->method == "dense") {
              m = train_dense(parts.train, valid, cfg);
            } else if (o->method == "l1") {
              m = train_l1(parts.train, valid, cfg, o->strength);
            } else {
              if (!(o->keep > 0.0 && o->keep <= 1.0)) throw ArgumentError("--keep must lie in (0, 1]");
              Network dense;
              if (!o->model.empty()) {
                s.manifest.input(o->model);
                dense = with_file("--model", o->model, [&] { return load_model(o->model); });
              } else {
                dense = train_dense(parts.train, valid, cfg).network;
                t.lap("train_dense");
              }
              m = prune_and_retrain(std::move(dense), o->keep, parts.train, valid, cfg.train);
            }
            t.lap("train");
            EvalReport rep = score(m.network, parts.test, o->name.empty() ? m.report.name : o->name);
            rep.effective_sparsity = m.report.effective_sparsity;
            const fs::path out = claim_output(s.manifest, "--out", o->out);
            save_model(m.network, out);
            s.manifest.output(out);
            if (!o->report.empty()) {
              save_report(rep, claim_output(s.manifest, "--report", o->report));
              s.manifest.output(o->report);
            }
            print_table(s.out, rep);
          }};
}

Command add_inspect(CLI::App& app, Session& s) {
  struct Opts {
    DataOptions data;
    std::string model;
    int top = 10;
    std::string embeddings;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("inspect", "List each top-layer unit's most correlated input features");
  sub->add_option("--model", o->model, "Model file")->required()->check(CLI::ExistingFile);
  o->data.add(sub);
  sub->add_option("--top", o->top, "Features listed per unit")->capture_default_str();
  sub->add_option("--embeddings", o->embeddings, "Word vectors ('count dim' header) for interpretability scores")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", o->out, "Write the table here instead of standard output");
  return {sub, [o, &s] {
            s.manifest.input(o->model);
            const Network net = with_file("--model", o->model, [&] { return load_model(o->model); });
            const Dataset d = o->data.load(s.manifest);
            if (o->top < 1) throw ArgumentError("--top must be at least 1");
            std::optional<EmbeddingTable> emb;
            if (!o->embeddings.empty()) {
              s.manifest.input(o->embeddings);
              emb = with_file("--embeddings", o->embeddings, [&] { return load_embeddings(o->embeddings); });
            }
            const auto& names = d.feature_names();
            auto name = [&](Eigen::Index j) {
              return names.empty() ? "f" + std::to_string(j) : names[static_cast<std::size_t>(j)];
            };
            std::ostringstream table;
            double sum = 0.0;
            long scored = 0;
            for (const auto& p : profile_units(net, d, o->top)) {
              table << "unit " << p.unit;
              if (emb) {
                const std::optional<double> score = unit_interpretability(p, names, *emb);
                table << " score=";
                if (score.has_value()) {
                  const double v = score.value();
                  table << std::fixed << std::setprecision(4) << v << std::defaultfloat;
                  sum += v;
                  ++scored;
                } else {
                  table << "n/a";
                }
              }
              if (p.degenerate) table << " (constant activation)";
              table << ':';
              for (const auto& f : p.top) {
                table << ' ' << name(f.feature) << '(' << std::fixed << std::setprecision(3) << f.correlation
                      << std::defaultfloat << ')';
              }
              table << '\n';
            }
            if (emb) {
              if (scored == 0) {
                table << "interpretability=n/a (no unit has a pair of listed words in the embeddings)\n";
              } else {
                table << "interpretability=" << std::fixed << std::setprecision(6)
                      << sum / static_cast<double>(scored) << std::defaultfloat << " units_scored=" << scored
                      << '\n';
              }
            }
            if (o->out.empty()) {
              s.out << table.str();
            } else {
              write_text(s.manifest, claim_output(s.manifest, "--out", o->out), table.str());
            }
          }};
}

Command add_compare(CLI::App& app, Session& s) {
  struct Opts {
    std::vector<std::string> reports;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("compare", "Align report files in one table");
  sub->add_option("reports", o->reports, "Report files")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o->out, "Write the table here instead of standard output");
  return {sub, [o, &s] {
            std::vector<EvalReport> reps;
            for (const auto& p : o->reports) {
              s.manifest.input(p);
              reps.push_back(load_report(p));
            }
            std::ostringstream table;
            write_table(reps, table);
            if (o->out.empty()) {
              s.out << table.str();
            } else {
              write_text(s.manifest, claim_output(s.manifest, "--out", o->out), table.str());
            }
          }};
}

std::vector<Command> add_gen(CLI::App& app, Session& s) {
  auto* gen = app.add_subcommand("gen", "Write synthetic datasets");
  gen->require_subcommand(1);
  std::vector<Command> out;

  {
    struct Opts {
      Eigen::Index variables = 32, samples = 2000;
      double flip = 0.1;
      std::uint64_t seed = 0;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = gen->add_subcommand("chain", "Binary Markov chain x0 -> x1 -> ...");
    sub->add_option("--variables", o->variables)->capture_default_str();
    sub->add_option("--samples", o->samples)->capture_default_str();
    sub->add_option("--flip", o->flip, "Flip probability between neighbours")->capture_default_str();
    sub->add_option("--seed", o->seed)->capture_default_str();
    sub->add_option("--out", o->out, "CSV output path")->required();
    out.emplace_back(sub, [o, &s] {
      s.manifest.seed("data", o->seed);
      save_dense_csv(synthetic::markov_chain(o->variables, o->samples, o->flip, o->seed), o->out);
      s.manifest.output(o->out);
    });
  }
  {
    struct Opts {
      Eigen::Index blocks = 8, block_size = 4, samples = 2000;
      double correlation = 0.9;
      std::uint64_t seed = 0;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = gen->add_subcommand("blocks", "Independent groups of correlated binary variables");
    sub->add_option("--blocks", o->blocks)->capture_default_str();
    sub->add_option("--block-size", o->block_size)->capture_default_str();
    sub->add_option("--correlation", o->correlation, "Pairwise correlation inside a group")->capture_default_str();
    sub->add_option("--samples", o->samples)->capture_default_str();
    sub->add_option("--seed", o->seed)->capture_default_str();
    sub->add_option("--out", o->out, "CSV output path")->required();
    out.emplace_back(sub, [o, &s] {
      s.manifest.seed("data", o->seed);
      save_dense_csv(synthetic::block_dataset(o->blocks, o->block_size, o->correlation, o->samples, o->seed),
                     o->out);
      s.manifest.output(o->out);
    });
  }
  {
    struct Opts {
      Eigen::Index samples = 1000, features = 8;
      int classes = 2;
      double separation = 8.0;
      std::uint64_t seed = 0;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = gen->add_subcommand("blobs", "Labeled Gaussian clusters");
    sub->add_option("--samples", o->samples)->capture_default_str();
    sub->add_option("--features", o->features)->capture_default_str();
    sub->add_option("--classes", o->classes)->capture_default_str();
    sub->add_option("--separation", o->separation)->capture_default_str();
    sub->add_option("--seed", o->seed)->capture_default_str();
    sub->add_option("--out", o->out, "CSV output path")->required();
    out.emplace_back(sub, [o, &s] {
      s.manifest.seed("data", o->seed);
      save_dense_csv(synthetic::gaussian_blobs(o->samples, o->features, o->classes, o->separation, o->seed),
                     o->out);
      s.manifest.output(o->out);
    });
  }
  {
    struct Opts {
      synthetic::CorpusConfig cfg;
      std::string out;
      std::string vocab_out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = gen->add_subcommand("corpus", "Labeled bag-of-words corpus with word clusters");
    sub->add_option("--documents", o->cfg.documents)->capture_default_str();
    sub->add_option("--vocabulary", o->cfg.vocabulary)->capture_default_str();
    sub->add_option("--classes", o->cfg.classes)->capture_default_str();
    sub->add_option("--length", o->cfg.mean_length, "Mean tokens per document")->capture_default_str();
    sub->add_option("--topical", o->cfg.topical, "Share of tokens from the document's own word clusters")
        ->capture_default_str();
    sub->add_option("--confusing", o->cfg.confusing, "Share of tokens from another class's clusters")
        ->capture_default_str();
    sub->add_option("--seed", o->cfg.seed)->capture_default_str();
    sub->add_option("--out", o->out, "Document file output path")->required();
    sub->add_option("--vocab-out", o->vocab_out, "Vocabulary file output path")->required();
    out.emplace_back(sub, [o, &s] {
      s.manifest.seed("data", o->cfg.seed);
      save_sparse_bow(synthetic::topic_corpus(o->cfg), o->out, o->vocab_out);
      s.manifest.output(o->out);
      s.manifest.output(o->vocab_out);
    });
  }
  return out;
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app, Session& session) {
  std::vector<Command> commands{add_tree(app, session),     add_build(app, session),
                                add_finetune(app, session), add_eval(app, session),
                                add_baseline(app, session), add_inspect(app, session),
                                add_compare(app, session)};
  for (auto& c : add_gen(app, session)) commands.push_back(std::move(c));
  return commands;
}

}  // namespace trfnet::cli
