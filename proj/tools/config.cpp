#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "isoflow/errors.hpp"

namespace isoflow::cli {

using nlohmann::json;

namespace {

// Input iterator that counts the newlines the parser has consumed.
struct CountingIter {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  int* line = nullptr;

  reference operator*() const { return *p; }
  CountingIter& operator++() {
    if (*p == '\n') ++*line;
    ++p;
    return *this;
  }
  CountingIter operator++(int) {
    CountingIter old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIter& o) const { return p == o.p; }
  bool operator!=(const CountingIter& o) const { return p != o.p; }
};

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

// Records the line of every value. Object members take the line of their key;
// array elements take the line where the parser stands when they complete,
// which can be one too far for a number that ends a line.
class LineRecorder : public nlohmann::json_sax<json> {
 public:
  LineRecorder(int* line, std::map<std::string, int>* lines) : line_(line), lines_(lines) {}

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    stack_.back().key = k;
    stack_.back().key_line = *line_;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
    int key_line = 1;
    std::string pointer;
  };

  std::pair<std::string, int> here() {
    if (stack_.empty()) return {"", *line_};
    Frame& f = stack_.back();
    if (f.array) return {f.pointer + "/" + std::to_string(f.index++), *line_};
    return {f.pointer + "/" + escape_pointer(f.key), f.key_line};
  }
  bool value() {
    auto [ptr, line] = here();
    (*lines_)[ptr] = line;
    return true;
  }
  bool open(bool array) {
    auto [ptr, line] = here();
    (*lines_)[ptr] = line;
    stack_.push_back(Frame{array, 0, {}, line, ptr});
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }

  int* line_;
  std::map<std::string, int>* lines_;
  std::vector<Frame> stack_;
};

std::string type_name(const json& j) { return j.type_name(); }

// Schema helpers over one object of the document.
class Node {
 public:
  Node(const ConfigDoc& doc, std::string pointer)
      : doc_(doc), ptr_(std::move(pointer)), j_(doc.root.at(json::json_pointer(ptr_))) {}

  const std::string& pointer() const { return ptr_; }
  const json& raw() const { return j_; }

  void require_object() const {
    if (!j_.is_object()) doc_.fail(ptr_, "expected an object, found " + type_name(j_));
  }
  void allow_only(const std::vector<std::string>& keys) const {
    require_object();
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) doc_.fail(child(it.key()), "unknown key '" + it.key() + "'");
  }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  std::string child(const std::string& key) const { return ptr_ + "/" + escape_pointer(key); }
  Node at(const std::string& key) const {
    if (!has(key)) doc_.fail(ptr_, "missing required key '" + key + "'");
    return Node(doc_, child(key));
  }

  double number(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_number()) doc_.fail(n.ptr_, "expected a number, found " + type_name(n.j_));
    const double v = n.j_.get<double>();
    if (!std::isfinite(v)) doc_.fail(n.ptr_, "must be finite");
    return v;
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) doc_.fail(child(key), "must be > 0");
    return v;
  }
  double positive(const std::string& key, double fallback) const {
    return has(key) ? positive(key) : fallback;
  }
  long integer(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_number_integer()) doc_.fail(n.ptr_, "expected an integer, found " + type_name(n.j_));
    return n.j_.get<long>();
  }
  long integer(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  std::string string(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_string()) doc_.fail(n.ptr_, "expected a string, found " + type_name(n.j_));
    return n.j_.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_array()) doc_.fail(n.ptr_, "expected an array, found " + type_name(n.j_));
    std::vector<double> out;
    for (std::size_t i = 0; i < n.j_.size(); ++i) {
      const auto& e = n.j_[i];
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        doc_.fail(n.ptr_ + "/" + std::to_string(i), "expected a finite number");
      out.push_back(e.get<double>());
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& message) const { doc_.fail(ptr_, message); }

 private:
  const ConfigDoc& doc_;
  std::string ptr_;
  const json& j_;
};

// Runs fn, turning library parameter errors into schema errors at `at`.
template <class F>
auto guarded(const Node& at, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    at.fail(e.what());
  }
}

AlgebraSpec parse_algebra(const Node& n) {
  n.require_object();
  if (n.has("name")) {
    n.allow_only({"name", "c"});
    const std::string name = n.string("name");
    const double c = n.number("c", 0.0);
    if (name == "su2") return AlgebraSpec::su2(c);
    if (name == "su11") return AlgebraSpec::su11(c);
    if (name == "oscillator") return AlgebraSpec::oscillator(c);
    if (name == "e2") return AlgebraSpec::e2(c);
    n.at("name").fail("unknown algebra '" + name + "' (su2, su11, oscillator, e2)");
  }
  n.allow_only({"a", "b", "c", "epsilon"});
  AlgebraSpec alg{n.number("a"), n.number("b"), n.number("c", 0.0),
                  static_cast<int>(n.integer("epsilon"))};
  guarded(n, [&] {
    alg.validate();
    return 0;
  });
  return alg;
}

RepresentationSpec parse_representation(const Node& n) {
  n.require_object();
  const std::string type = n.string("type");
  RepresentationSpec rep;
  if (type == "su2") {
    n.allow_only({"type", "j"});
    rep = rep::SU2{n.number("j")};
  } else if (type == "discrete_series") {
    n.allow_only({"type", "k", "n_max"});
    rep = rep::DiscreteSeriesPlus{n.number("k"), n.integer("n_max", 60)};
  } else if (type == "principal_series") {
    n.allow_only({"type", "rho", "eps", "n_min", "n_max"});
    rep = rep::PrincipalSeries{n.number("rho"), n.number("eps"), n.integer("n_min", -40),
                               n.integer("n_max", 40)};
  } else if (type == "oscillator") {
    n.allow_only({"type", "k", "h", "n_max"});
    rep = rep::Oscillator{n.number("k", 0.0), n.number("h", 1.0), n.integer("n_max", 60)};
  } else if (type == "e2") {
    n.allow_only({"type", "k", "n_min", "n_max"});
    rep = rep::E2{n.number("k"), n.integer("n_min", -40), n.integer("n_max", 40)};
  } else {
    n.at("type").fail("unknown representation '" + type +
                      "' (su2, discrete_series, principal_series, oscillator, e2)");
  }
  guarded(n, [&] {
    validate(rep);
    return 0;
  });
  return rep;
}

UPolicy parse_policy(const Node& parent, const std::string& key) {
  if (!parent.has(key)) return policy::Toda{};
  const Node n = parent.at(key);
  if (n.raw().is_string()) {
    if (n.raw() == "toda") return policy::Toda{};
    n.fail("unknown policy '" + n.raw().get<std::string>() + "' (toda, signed_scaled)");
  }
  n.require_object();
  const std::string type = n.string("type");
  if (type == "toda") {
    n.allow_only({"type"});
    return policy::Toda{};
  }
  if (type != "signed_scaled") n.at("type").fail("unknown policy '" + type + "'");
  n.allow_only({"type", "sigma", "gamma"});
  policy::SignedScaled p;
  p.sigma = static_cast<int>(n.integer("sigma"));
  if (n.has("gamma") && n.raw()["gamma"].is_object()) {
    const Node g = n.at("gamma");
    g.allow_only({"t", "gamma"});
    p.gamma = GammaTable{g.numbers("t"), g.numbers("gamma")};
  } else {
    p.gamma = n.number("gamma", 1.0);
  }
  UPolicy out = p;
  guarded(n, [&] {
    validate(out);
    return 0;
  });
  return out;
}

FlowSpec parse_flow_common(const Node& n) {
  FlowSpec f;
  f.policy = parse_policy(n, "policy");
  f.dt = n.positive("dt", 1e-3);
  f.t_end = n.positive("t_end", 1.0);
  f.record_every = static_cast<int>(n.integer("record_every", 1));
  if (f.record_every < 1) n.at("record_every").fail("must be >= 1");
  return f;
}

std::vector<CheckSpec> parse_checks(const ConfigDoc& doc,
                                    const std::map<std::string, std::vector<std::string>>& kinds) {
  std::vector<CheckSpec> out;
  if (!doc.root.contains("checks")) return out;
  const Node list(doc, "/checks");
  if (!list.raw().is_array()) list.fail("expected an array of checks");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < list.raw().size(); ++i) {
    const Node n(doc, "/checks/" + std::to_string(i));
    n.require_object();
    CheckSpec c;
    c.pointer = n.pointer();
    c.name = n.string("name");
    const auto kind = kinds.find(c.name);
    if (kind == kinds.end()) {
      std::string known;
      for (const auto& [k, v] : kinds) known += (known.empty() ? "" : ", ") + k;
      n.at("name").fail("unknown check '" + c.name + "' (known: " + known + ")");
    }
    std::vector<std::string> allowed = {"name", "label", "tolerance"};
    allowed.insert(allowed.end(), kind->second.begin(), kind->second.end());
    n.allow_only(allowed);
    c.label = n.has("label") ? n.string("label") : c.name;
    if (!labels.insert(c.label).second)
      n.fail("duplicate report row '" + c.label + "'; give the check a distinct label");
    c.tolerance = n.positive("tolerance");
    for (const auto& key : kind->second)
      if (n.has(key)) c.params[key] = n.raw()[key];
    out.push_back(std::move(c));
  }
  return out;
}

OutputSpec parse_output(const ConfigDoc& doc) {
  OutputSpec o;
  if (!doc.root.contains("output")) return o;
  const Node n(doc, "/output");
  n.allow_only({"directory", "precision"});
  if (n.has("directory")) o.directory = n.string("directory");
  o.precision = static_cast<int>(n.integer("precision", 17));
  if (o.precision < 1 || o.precision > 17) n.at("precision").fail("must be in 1..17");
  return o;
}

std::uint64_t parse_seed(const Node& root) {
  if (!root.has("seed")) return 0;
  const long s = root.integer("seed");
  if (s < 0) root.at("seed").fail("must be >= 0");
  return static_cast<std::uint64_t>(s);
}

ChainState parse_chain_state(const Node& n) {
  n.allow_only({"s0", "r0"});
  ChainState st;
  st.s = n.numbers("s0");
  st.r = n.numbers("r0");
  if (st.s.empty()) n.at("s0").fail("needs at least one entry");
  if (st.s.size() != st.r.size()) n.at("r0").fail("must have the same length as s0");
  guarded(n, [&] {
    st.validate();
    return 0;
  });
  return st;
}

}  // namespace

int ConfigDoc::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    auto it = lines.find(p);
    if (it != lines.end()) return it->second;
    if (p.empty()) return 1;
    p = p.substr(0, p.rfind('/'));
  }
}

void ConfigDoc::fail(const std::string& pointer, const std::string& message) const {
  const int line = line_of(pointer);
  throw SchemaError(file + ":" + std::to_string(line) + ": " + (pointer.empty() ? "/" : pointer) +
                        ": " + message,
                    line);
}

ConfigDoc load_config_text(const std::string& text, const std::string& file) {
  ConfigDoc doc;
  doc.file = file;
  try {
    doc.root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    throw SchemaError(file + ":" + std::to_string(line) + ": syntax error: " + e.what(), line);
  }
  int line = 1;
  LineRecorder rec(&line, &doc.lines);
  json::sax_parse(CountingIter{text.data(), &line}, CountingIter{text.data() + text.size(), &line},
                  &rec);
  if (!doc.root.is_object()) doc.fail("", "the configuration must be a JSON object");
  return doc;
}

ConfigDoc load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ":1: cannot open file", 1);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), path);
}

const std::map<std::string, std::vector<std::string>>& run_check_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds = {
      {"lax_residual", {"random_samples"}},
      {"invariant_drift", {}},
      {"isospectrality_drift", {"leading"}},
      {"sign_conditions", {}},
      {"modification_constancy", {"family"}},
      {"modification_K", {"family", "expected"}},
      {"recurrence_residual", {"family", "points", "rows"}},
  };
  return kinds;
}

const std::map<std::string, std::vector<std::string>>& chain_check_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds = {
      {"spectrum_drift", {}},
      {"trace_drift", {}},
      {"lax_residual", {}},
      {"eigenvalue_sum", {}},
      {"christoffel_orthogonality", {}},
      {"trace_closed_form", {}},
      {"pn_time_derivative", {"h"}},
  };
  return kinds;
}

const std::map<std::string, std::vector<std::string>>& mvk_check_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds = {
      {"mvk_orthogonality", {}},
      {"mvk_recurrence", {}},
      {"mvk_unit", {}},
      {"mvk_eigvec_derivative", {"h"}},
      {"mvk_theorem_derivative", {"h"}},
      {"krawtchouk_reduction", {"s", "r"}},
  };
  return kinds;
}

RunConfig parse_run_config(const ConfigDoc& doc) {
  const Node root(doc, "");
  root.allow_only({"seed", "algebra", "representation", "flow", "checks", "output"});
  RunConfig cfg;
  cfg.seed = parse_seed(root);
  cfg.representation = parse_representation(root.at("representation"));
  cfg.algebra = root.has("algebra") ? parse_algebra(root.at("algebra"))
                                    : natural_algebra(cfg.representation);
  guarded(root.has("algebra") ? root.at("algebra") : root.at("representation"), [&] {
    check_compatible(cfg.representation, cfg.algebra);
    return 0;
  });
  const Node flow = root.at("flow");
  flow.allow_only({"r0", "s0", "policy", "dt", "t_end", "record_every"});
  cfg.initial = FlowState{0.0, flow.number("r0"), flow.number("s0")};
  cfg.flow = parse_flow_common(flow);
  cfg.checks = parse_checks(doc, run_check_kinds());
  for (const auto& c : cfg.checks) {
    const Node n(doc, c.pointer);
    if (c.params.contains("family"))
      guarded(n.at("family"), [&] { return parse_family(n.string("family")); });
    if ((c.name == "modification_constancy" || c.name == "modification_K" ||
         c.name == "recurrence_residual") &&
        !n.has("family"))
      n.fail("missing required key 'family'");
    if (c.name == "modification_K") n.number("expected");
    if (c.name == "recurrence_residual") {
      if (n.numbers("points").empty()) n.at("points").fail("needs at least one point");
      const auto rows = n.numbers("rows");
      if (rows.size() != 2 || rows[0] > rows[1] || rows[0] != std::floor(rows[0]) ||
          rows[1] != std::floor(rows[1]))
        n.at("rows").fail("expected [first, last] integer rows");
    }
    if (c.name == "lax_residual" && n.has("random_samples") && n.integer("random_samples") < 0)
      n.at("random_samples").fail("must be >= 0");
    if (c.name == "isospectrality_drift" && n.has("leading") && n.integer("leading") < 1)
      n.at("leading").fail("must be >= 1");
  }
  cfg.output = parse_output(doc);
  return cfg;
}

ChainConfig parse_chain_config(const ConfigDoc& doc) {
  const Node root(doc, "");
  root.allow_only({"seed", "chain", "flow", "checks", "output"});
  ChainConfig cfg;
  cfg.seed = parse_seed(root);
  cfg.initial = parse_chain_state(root.at("chain"));
  const Node flow = root.at("flow");
  flow.allow_only({"policy", "dt", "t_end", "record_every"});
  cfg.flow = parse_flow_common(flow);
  cfg.checks = parse_checks(doc, chain_check_kinds());
  for (const auto& c : cfg.checks)
    if (c.params.contains("h")) Node(doc, c.pointer).positive("h");
  cfg.output = parse_output(doc);
  return cfg;
}

MvkConfig parse_mvk_config(const ConfigDoc& doc) {
  const Node root(doc, "");
  root.allow_only({"seed", "chain", "N", "policy", "checks", "output"});
  MvkConfig cfg;
  cfg.seed = parse_seed(root);
  cfg.state = parse_chain_state(root.at("chain"));
  cfg.N = static_cast<int>(root.integer("N"));
  if (cfg.N < 1 || cfg.N > 12) root.at("N").fail("must be in 1..12");
  cfg.policy = parse_policy(root, "policy");
  cfg.checks = parse_checks(doc, mvk_check_kinds());
  for (const auto& c : cfg.checks) {
    const Node n(doc, c.pointer);
    if (c.params.contains("h")) n.positive("h");
    if (c.name == "krawtchouk_reduction") {
      n.number("s");
      n.number("r");
    }
  }
  cfg.output = parse_output(doc);
  return cfg;
}

}  // namespace isoflow::cli
