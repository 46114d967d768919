#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli_app.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using isoflow::cli::run_cli;

#ifndef ISOFLOW_CONFIG_DIR
#error "ISOFLOW_CONFIG_DIR must point at the example configurations"
#endif

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "isoflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config(const std::string& name) { return std::string(ISOFLOW_CONFIG_DIR) + "/" + name; }

// Fresh output directory wired through ISOFLOW_OUT.
fs::path fresh_out(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("isoflow_test_" + tag);
  fs::remove_all(dir);
  setenv("ISOFLOW_OUT", dir.c_str(), 1);
  return dir;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("su(2) Toda demo passes and writes the three CSVs") {
  const fs::path dir = fresh_out("demo");
  const Result r = invoke({"run", config("su2_toda_demo.json")});
  CHECK(r.code == 0);
  const std::string report = slurp(dir / "report.csv");
  CHECK(report.rfind("check,value,tolerance,pass\n", 0) == 0);
  CHECK(report.find("isospectrality_drift,") != std::string::npos);
  CHECK(report.find(",fail") == std::string::npos);
  CHECK(slurp(dir / "trajectory.csv").rfind("t,r,s,u,I\n", 0) == 0);
  CHECK(slurp(dir / "spectrum.csv").rfind("t,index,lambda\n", 0) == 0);
}

TEST_CASE("runs are byte-identical") {
  const fs::path a = fresh_out("det_a");
  REQUIRE(invoke({"run", config("su2_toda_demo.json")}).code == 0);
  const fs::path b = fresh_out("det_b");
  REQUIRE(invoke({"run", config("su2_toda_demo.json")}).code == 0);
  for (const char* f : {"report.csv", "trajectory.csv", "spectrum.csv"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("su(1,1) with sigma = +1 violates the sign lemma") {
  const fs::path dir = fresh_out("wrong_sign");
  const Result r = invoke({"run", config("su11_wrong_sign.json")});
  CHECK(r.code == 1);
  const std::string report = slurp(dir / "report.csv");
  CHECK(report.find("sign_conditions,1,0.5,fail") != std::string::npos);
  CHECK(report.find("invariant_drift,") != std::string::npos);
}

TEST_CASE("empty checks list") {
  const fs::path dir = fresh_out("empty");
  const auto cfg = write_temp("isoflow_empty.json",
                              R"({"representation": {"type": "su2", "j": 1},
                                  "flow": {"r0": 1, "s0": 0}, "checks": []})");
  CHECK(invoke({"run", cfg.string()}).code == 0);
  CHECK(slurp(dir / "report.csv") == "check,value,tolerance,pass\n");
}

TEST_CASE("schema errors exit 2 with the offending line") {
  fresh_out("schema");
  const auto zero_tol = write_temp("isoflow_zero_tol.json", "{\n"
                                                            "  \"representation\": {\"type\": \"su2\", \"j\": 1},\n"
                                                            "  \"flow\": {\"r0\": 1, \"s0\": 0},\n"
                                                            "  \"checks\": [\n"
                                                            "    {\"name\": \"invariant_drift\",\n"
                                                            "     \"tolerance\": 0}\n"
                                                            "  ]\n"
                                                            "}\n");
  Result r = invoke({"run", zero_tol.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(":6: /checks/0/tolerance: must be > 0") != std::string::npos);

  const auto unknown = write_temp("isoflow_unknown.json", "{\n"
                                                          "  \"representation\": {\"type\": \"su2\", \"j\": 1},\n"
                                                          "  \"flow\": {\"r0\": 1, \"s0\": 0, \"dtt\": 3}\n"
                                                          "}\n");
  r = invoke({"run", unknown.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(":3: /flow/dtt: unknown key") != std::string::npos);

  const auto syntax = write_temp("isoflow_syntax.json", "{\n  \"flow\": {\n    \"r0\": 1,,\n  }\n}\n");
  r = invoke({"run", syntax.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(":3: syntax error") != std::string::npos);

  const auto mismatch = write_temp("isoflow_mismatch.json",
                                   "{\"algebra\": {\"name\": \"su11\"},\n"
                                   " \"representation\": {\"type\": \"su2\", \"j\": 1},\n"
                                   " \"flow\": {\"r0\": 1, \"s0\": 0}}\n");
  r = invoke({"run", mismatch.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(":1: /algebra:") != std::string::npos);

  CHECK(invoke({"run", "/nonexistent/isoflow.json"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
}

TEST_CASE("unknown check names are rejected") {
  const auto cfg = write_temp("isoflow_badcheck.json",
                              R"({"representation": {"type": "su2", "j": 1},
                                  "flow": {"r0": 1, "s0": 0},
                                  "checks": [{"name": "nope", "tolerance": 1}]})");
  const Result r = invoke({"run", cfg.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown check 'nope'") != std::string::npos);
}

TEST_CASE("chain and mvk commands") {
  fs::path dir = fresh_out("chain");
  CHECK(invoke({"chain", config("chain_sl4.json")}).code == 0);
  CHECK(slurp(dir / "trajectory.csv").rfind("t,s1,s2,s3,r1,r2,r3\n", 0) == 0);
  CHECK(slurp(dir / "spectrum.csv").rfind("t,index,lambda\n", 0) == 0);
  dir = fresh_out("mvk");
  CHECK(invoke({"mvk", config("mvk_d2_N2.json")}).code == 0);
  CHECK(slurp(dir / "mvk.csv").rfind("sigma,rho,P\n2-0-0,", 0) == 0);
  dir = fresh_out("meixner");
  CHECK(invoke({"run", config("meixner_modification.json")}).code == 0);
}

TEST_CASE("verify filtering and tolerance validation") {
  fresh_out("verify");
  Result r = invoke({"verify", "--only", "modification"});
  CHECK(r.code == 0);
  CHECK(r.out.find("criterion  6 modification") != std::string::npos);
  CHECK(r.out.find("criterion  1 ") == std::string::npos);

  r = invoke({"verify", "--only", "lax", "--tol", "lax_residual_e2=0"});
  CHECK(r.code == 2);
  r = invoke({"verify", "--only", "nonsense"});
  CHECK(r.code == 2);
  r = invoke({"verify", "--only", "lax", "--tol", "no_such_check=1e-3"});
  CHECK(r.code == 2);
  r = invoke({"verify", "--only", "lax", "--tol", "lax_residual_e2=abc"});
  CHECK(r.code == 2);
  // A tightened tolerance fails honestly.
  r = invoke({"verify", "--only", "closed_form", "--tol", "toda_orbit_s_error=1e-30"});
  CHECK(r.code == 1);
}

}  // TEST_SUITE
