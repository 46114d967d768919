#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "isoflow/algebra_reps.hpp"
#include "isoflow/family_tag.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/higher_rank.hpp"

namespace isoflow::cli {

// Schema violation; what() is "<file>:<line>: <pointer>: <message>".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parsed JSON plus the source line of every value, keyed by JSON pointer.
struct ConfigDoc {
  std::string file;
  nlohmann::json root;
  std::map<std::string, int> lines;

  int line_of(const std::string& pointer) const;
  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;
};

ConfigDoc load_config_text(const std::string& text, const std::string& file = "<config>");
ConfigDoc load_config(const std::string& path);

struct CheckSpec {
  std::string name;   // check kind
  std::string label;  // report row name, defaults to name
  double tolerance = 0.0;
  nlohmann::json params = nlohmann::json::object();
  std::string pointer;
};

struct OutputSpec {
  std::string directory = "isoflow_out";
  int precision = 17;
};

struct FlowSpec {
  UPolicy policy = policy::Toda{};
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 1;
};

struct RunConfig {
  std::uint64_t seed = 0;
  AlgebraSpec algebra;
  RepresentationSpec representation;
  FlowState initial;
  FlowSpec flow;
  std::vector<CheckSpec> checks;
  OutputSpec output;
};

struct ChainConfig {
  std::uint64_t seed = 0;
  ChainState initial;
  FlowSpec flow;
  std::vector<CheckSpec> checks;
  OutputSpec output;
};

struct MvkConfig {
  std::uint64_t seed = 0;
  ChainState state;
  int N = 2;
  UPolicy policy = policy::Toda{};
  std::vector<CheckSpec> checks;
  OutputSpec output;
};

// Check kinds accepted by each command, with the parameter keys they take.
const std::map<std::string, std::vector<std::string>>& run_check_kinds();
const std::map<std::string, std::vector<std::string>>& chain_check_kinds();
const std::map<std::string, std::vector<std::string>>& mvk_check_kinds();

RunConfig parse_run_config(const ConfigDoc& doc);
ChainConfig parse_chain_config(const ConfigDoc& doc);
MvkConfig parse_mvk_config(const ConfigDoc& doc);

}  // namespace isoflow::cli
