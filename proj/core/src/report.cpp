#include "trfnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

namespace {

using detail::format_double;

std::string format_number(double v) { return std::isnan(v) ? "nan" : format_double(v); }

std::string percent(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

double parse_number(std::string_view s, const std::string& key) {
  if (detail::trim(s) == "nan") return std::numeric_limits<double>::quiet_NaN();
  const auto v = detail::parse_double(s);
  if (!v) throw FormatError("report field '" + key + "' is not a number");
  return *v;
}

}  // namespace

void write_report(const EvalReport& r, std::ostream& out) {
  if (r.name.find('\n') != std::string::npos) throw ArgumentError("report name must be a single line");
  out << "trfnet-report 1\n";
  out << "name=" << r.name << '\n';
  if (r.accuracy) out << "accuracy=" << format_number(*r.accuracy) << '\n';
  if (!r.task_auc.empty()) out << "task_auc=" << join(r.task_auc, format_number) << '\n';
  if (r.mean_auc) out << "mean_auc=" << format_number(*r.mean_auc) << '\n';
  out << "parameters=" << r.parameter_count << '\n';
  out << "sparsity=" << format_number(r.sparsity) << '\n';
  if (r.effective_sparsity) out << "effective_sparsity=" << format_number(*r.effective_sparsity) << '\n';
  out << "widths=" << join(r.widths, [](Eigen::Index w) { return std::to_string(w); }) << '\n';
}

EvalReport read_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "trfnet-report 1") {
    throw FormatError("not a trfnet report (missing 'trfnet-report 1' header)");
  }
  EvalReport r;
  bool have_params = false, have_sparsity = false;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("report line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string_view value = std::string_view(line).substr(eq + 1);
    if (key == "name") {
      r.name = std::string(value);
    } else if (key == "accuracy") {
      r.accuracy = parse_number(value, key);
    } else if (key == "task_auc") {
      for (auto part : detail::split_on(value, ',')) r.task_auc.push_back(parse_number(part, key));
    } else if (key == "mean_auc") {
      r.mean_auc = parse_number(value, key);
    } else if (key == "parameters") {
      const auto v = detail::parse_int<Eigen::Index>(value);
      if (!v) throw FormatError("report field 'parameters' is not an integer");
      r.parameter_count = *v;
      have_params = true;
    } else if (key == "sparsity") {
      r.sparsity = parse_number(value, key);
      have_sparsity = true;
    } else if (key == "effective_sparsity") {
      r.effective_sparsity = parse_number(value, key);
    } else if (key == "widths") {
      if (!detail::trim(value).empty()) {
        for (auto part : detail::split_on(value, ',')) {
          const auto v = detail::parse_int<Eigen::Index>(part);
          if (!v) throw FormatError("report field 'widths' holds a non-integer");
          r.widths.push_back(*v);
        }
      }
    } else {
      throw FormatError("unknown report field '" + key + "'");
    }
  }
  if (!have_params || !have_sparsity) throw FormatError("report is missing parameters or sparsity");
  return r;
}

void save_report(const EvalReport& r, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_report(r, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << buffer.str();
  if (!out) throw Error("failed writing " + path.string());
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return read_report(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_table(std::span<const EvalReport> reports, std::ostream& out) {
  const std::vector<std::string> header{"model", "accuracy", "parameters", "sparsity", "effective"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    std::string metric = "-";
    if (r.accuracy) {
      metric = percent(*r.accuracy);
    } else if (r.mean_auc) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "auc %.4f", *r.mean_auc);
      metric = buf;
    }
    rows.push_back({r.name.empty() ? "-" : r.name, metric, std::to_string(r.parameter_count),
                    percent(r.sparsity),
                    r.effective_sparsity ? percent(*r.effective_sparsity) : std::string("-")});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total - 2, '-') << '\n';
  for (const auto& row : rows) emit(row);
}

}  // namespace trfnet
