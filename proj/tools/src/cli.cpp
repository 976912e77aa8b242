#include "cli.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "trfnet/error.hpp"

namespace trfnet::cli {

namespace {

std::string command_name(const CLI::App* app) {
  std::string name;
  for (; app != nullptr && app->get_parent() != nullptr; app = app->get_parent()) {
    name = name.empty() ? app->get_name() : app->get_name() + " " + name;
  }
  return name;
}

void record_flags(const CLI::App* app, Manifest& m) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    m.flag(opt->get_name(), value);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> argv_store{"trfnet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  Manifest manifest(argv_store);
  Session session{out, err, manifest};

  CLI::App app{"Sparse neural network structure learning with tree receptive fields", "trfnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TRFNET_VERSION);

  std::vector<Command> commands;
  try {
    commands = register_commands(app, session);
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "trfnet " << TRFNET_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run 'trfnet --help' for usage\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (const auto& [sub, action] : commands) {
    if (!sub->parsed()) continue;
    manifest.set_command(command_name(sub));
    record_flags(sub, manifest);
    try {
      action();
      manifest.write();
      return kExitOk;
    } catch (const ArgumentError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace trfnet::cli
