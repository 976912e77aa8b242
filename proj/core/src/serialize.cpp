#include "trfnet/serialize.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "text_util.hpp"
#include "trfnet/error.hpp"

namespace trfnet {

namespace {

using detail::format_double;

void put_values(std::ostream& out, const char* tag, const Vector& v) {
  out << tag;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
  out << '\n';
}

void put_indices(std::ostream& out, const std::vector<Eigen::Index>& v) {
  out << ' ' << v.size();
  for (auto i : v) out << ' ' << i;
}

const char* head_name(HeadKind k) { return k == HeadKind::softmax ? "softmax" : "multitask"; }

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next line split into tokens; the first must equal `tag`.
  const std::vector<std::string_view>& expect(std::string_view tag) {
    if (!std::getline(in_, line_)) fail("unexpected end of file, wanted '" + std::string(tag) + "'");
    ++number_;
    tokens_ = detail::split_ws(line_);
    if (tokens_.empty() || tokens_.front() != tag) fail("expected '" + std::string(tag) + "'");
    return tokens_;
  }

  std::string_view raw_line() {
    if (!std::getline(in_, line_)) fail("unexpected end of file");
    ++number_;
    return line_;
  }

  template <typename Int = Eigen::Index>
  Int integer(std::size_t pos, Int lo = 0) const {
    const auto v = pos < tokens_.size() ? detail::parse_int<Int>(tokens_[pos]) : std::nullopt;
    if (!v || *v < lo) fail("bad integer field");
    return *v;
  }

  double real(std::size_t pos) const {
    const auto v = pos < tokens_.size() ? detail::parse_double(tokens_[pos]) : std::nullopt;
    if (!v || !std::isfinite(*v)) fail("bad number");
    return *v;
  }

  std::string_view word(std::size_t pos) const {
    if (pos >= tokens_.size()) fail("missing field");
    return tokens_[pos];
  }

  void arity(std::size_t n) const {
    if (tokens_.size() != n) fail("wrong number of fields");
  }

  Vector values(std::string_view tag, Eigen::Index n) {
    expect(tag);
    arity(static_cast<std::size_t>(n) + 1);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = real(static_cast<std::size_t>(i) + 1);
    return v;
  }

  std::vector<Eigen::Index> indices(std::size_t& pos, Eigen::Index bound) const {
    const auto n = integer(pos++);
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto v = integer(pos++);
      if (v >= bound) fail("index out of range");
      out.push_back(v);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("model file line " + std::to_string(number_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::string line_;
  std::vector<std::string_view> tokens_;
  std::size_t number_ = 0;
};

MaskedLayer read_layer(Reader& r) {
  r.expect("layer");
  r.arity(4);
  const auto h = r.integer(1, Eigen::Index{1});
  const auto v = r.integer(2, Eigen::Index{1});
  MaskedLayer l;
  try {
    l.activation = parse_activation(std::string(r.word(3)));
  } catch (const ArgumentError&) {
    r.fail("unknown activation");
  }
  l.mask = Matrix::Zero(h, v);
  l.weights = Matrix::Zero(h, v);
  std::vector<std::vector<Eigen::Index>> cols(static_cast<std::size_t>(h));
  for (Eigen::Index i = 0; i < h; ++i) {
    r.expect("m");
    std::size_t pos = 1;
    cols[static_cast<std::size_t>(i)] = r.indices(pos, v);
    r.arity(pos);
    const auto& c = cols[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j > 0 && c[j] <= c[j - 1]) r.fail("mask columns must be strictly ascending");
      l.mask(i, c[j]) = 1.0;
    }
  }
  for (Eigen::Index i = 0; i < h; ++i) {
    const auto& c = cols[static_cast<std::size_t>(i)];
    const Vector w = r.values("w", static_cast<Eigen::Index>(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j) l.weights(i, c[j]) = w[static_cast<Eigen::Index>(j)];
  }
  l.bias_hidden = r.values("bh", h);
  l.bias_visible = r.values("bv", v);
  return l;
}

/// Reads the body of a plan whose header line is the reader's current line.
ReceptiveFieldPlan read_plan(Reader& r) {
  ReceptiveFieldPlan p;
  r.arity(6);
  p.radius = r.integer<int>(1);
  p.stride = r.integer<int>(2, 1);
  p.visible = r.integer(3, Eigen::Index{1});
  const auto centers = r.integer(4);
  p.global_count = r.integer(5);
  for (Eigen::Index i = 0; i < centers; ++i) {
    r.expect("c");
    const auto c = r.integer(1);
    if (c >= p.visible) r.fail("center out of range");
    std::size_t pos = 2;
    p.centers.push_back(c);
    p.fields.push_back(r.indices(pos, p.visible));
    p.extras.push_back(r.indices(pos, p.visible));
    r.arity(pos);
  }
  return p;
}

}  // namespace

void write_model(const Network& net, std::ostream& out) {
  net.check_chain();
  if (!net.plans.empty() && net.plans.size() != net.layers.size()) {
    throw ArgumentError("network has plans for some layers but not all");
  }
  out << "trfnet-model " << kModelFormatVersion << '\n';
  out << "provenance " << net.provenance.size() << '\n';
  for (const auto& [k, v] : net.provenance) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw ArgumentError("provenance entries must be single-line key=value pairs");
    }
    out << k << '=' << v << '\n';
  }
  out << "layers " << net.layers.size() << '\n';
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const auto& l = net.layers[k];
    if (!l.mask_holds()) throw ArgumentError("layer " + std::to_string(k) + " has weights outside its mask");
    out << "layer " << l.hidden() << ' ' << l.visible() << ' ' << to_string(l.activation) << '\n';
    for (Eigen::Index i = 0; i < l.hidden(); ++i) {
      out << "m " << (l.mask.row(i).array() != 0.0).count();
      for (Eigen::Index j = 0; j < l.visible(); ++j) {
        if (l.mask(i, j) != 0.0) out << ' ' << j;
      }
      out << '\n';
    }
    for (Eigen::Index i = 0; i < l.hidden(); ++i) {
      out << 'w';
      for (Eigen::Index j = 0; j < l.visible(); ++j) {
        if (l.mask(i, j) != 0.0) out << ' ' << format_double(l.weights(i, j));
      }
      out << '\n';
    }
    put_values(out, "bh", l.bias_hidden);
    put_values(out, "bv", l.bias_visible);
    if (net.plans.empty()) {
      out << "plan none\n";
      continue;
    }
    const auto& p = net.plans[k];
    out << "plan " << p.radius << ' ' << p.stride << ' ' << p.visible << ' ' << p.centers.size() << ' '
        << p.global_count << '\n';
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
      out << "c " << p.centers[i];
      put_indices(out, p.fields[i]);
      put_indices(out, p.extras[i]);
      out << '\n';
    }
  }
  if (!net.head) {
    out << "head none\n";
  } else {
    const auto& h = *net.head;
    out << "head " << head_name(net.head_kind) << ' ' << h.outputs() << ' ' << h.inputs() << '\n';
    for (Eigen::Index i = 0; i < h.outputs(); ++i) put_values(out, "r", h.weights.row(i).transpose());
    put_values(out, "hb", h.bias);
  }
  out << "end\n";
}

Network read_model(std::istream& in) {
  Reader r(in);
  const auto& magic = r.expect("trfnet-model");
  r.arity(2);
  if (r.integer<int>(1) != kModelFormatVersion) {
    r.fail("unsupported format version " + std::string(magic[1]));
  }
  Network net;
  r.expect("provenance");
  r.arity(2);
  const auto entries = r.integer(1);
  for (Eigen::Index i = 0; i < entries; ++i) {
    const std::string_view line = r.raw_line();
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) r.fail("provenance line without '='");
    net.provenance.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  r.expect("layers");
  r.arity(2);
  const auto layers = r.integer(1);
  bool planned = false;
  for (Eigen::Index k = 0; k < layers; ++k) {
    net.layers.push_back(read_layer(r));
    const auto& head = r.expect("plan");
    if (head.size() == 2 && head[1] == "none") {
      if (planned) r.fail("plans must be given for every layer or none");
      continue;
    }
    if (k > 0 && !planned) r.fail("plans must be given for every layer or none");
    planned = true;
    net.plans.push_back(read_plan(r));
  }
  const auto& head = r.expect("head");
  if (!(head.size() == 2 && head[1] == "none")) {
    r.arity(4);
    if (head[1] == "softmax") {
      net.head_kind = HeadKind::softmax;
    } else if (head[1] == "multitask") {
      net.head_kind = HeadKind::multitask;
    } else {
      r.fail("unknown head kind");
    }
    const auto o = r.integer(2, Eigen::Index{1});
    const auto i = r.integer(3, Eigen::Index{1});
    DenseLayer h;
    h.weights.resize(o, i);
    for (Eigen::Index row = 0; row < o; ++row) h.weights.row(row) = r.values("r", i).transpose();
    h.bias = r.values("hb", o);
    net.head = std::move(h);
  }
  r.expect("end");
  r.arity(1);
  try {
    net.check_chain();
  } catch (const ShapeError& e) {
    throw FormatError(std::string("model file is inconsistent: ") + e.what());
  }
  for (std::size_t k = 0; k < net.plans.size(); ++k) {
    if (net.plans[k].hidden_units() != net.layers[k].hidden() || net.plans[k].visible != net.layers[k].visible()) {
      throw FormatError("model file is inconsistent: plan " + std::to_string(k) + " does not match its layer");
    }
  }
  return net;
}

void save_model(const Network& net, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_model(net, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << buffer.str();
  if (!out) throw Error("failed writing " + path.string());
}

Network load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_model(in);
}

}  // namespace trfnet
