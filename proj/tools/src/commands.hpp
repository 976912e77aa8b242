#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace CLI {
class App;
}

namespace trfnet::cli {

class Manifest;

struct Session {
  std::ostream& out;
  std::ostream& err;
  Manifest& manifest;
};

/// A subcommand and the work to do when it was the one parsed.
using Command = std::pair<CLI::App*, std::function<void()>>;

std::vector<Command> register_commands(CLI::App& app, Session& session);

}  // namespace trfnet::cli
