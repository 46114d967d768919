#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "isoflow/acceptance.hpp"
#include "isoflow/csv.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/mvk.hpp"
#include "isoflow/random.hpp"
#include "isoflow/spectral.hpp"

namespace isoflow::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Row {
  std::string check;
  double value = kNaN;
  double tolerance = 0.0;
  bool pass = false;
};

// Evaluates the configured checks in order. A check that throws gets a NaN
// row marked fail, so every configured check appears in the report.
class Reporter {
 public:
  explicit Reporter(std::ostream& err) : err_(err) {}

  void add(const CheckSpec& c, const std::function<double()>& eval) {
    Row row{c.label, kNaN, c.tolerance, false};
    try {
      row.value = eval();
      row.pass = std::isfinite(row.value) && row.value <= c.tolerance;
    } catch (const Error& e) {
      err_ << "check " << c.label << ": " << e.what() << '\n';
      numerical_failure_ = true;
    }
    rows_.push_back(row);
  }
  void fail_unavailable(const CheckSpec& c, const std::string& why) {
    err_ << "check " << c.label << ": " << why << '\n';
    rows_.push_back(Row{c.label, kNaN, c.tolerance, false});
  }

  bool all_pass() const {
    return !numerical_failure_ &&
           std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.pass; });
  }
  void mark_failure() { numerical_failure_ = true; }

  void write(std::ostream& os, int digits) const {
    csv::write_row(os, {"check", "value", "tolerance", "pass"});
    for (const auto& r : rows_)
      csv::write_row(os, {r.check, csv::format_double(r.value, digits),
                          csv::format_double(r.tolerance, digits), r.pass ? "pass" : "fail"});
  }

 private:
  std::ostream& err_;
  std::vector<Row> rows_;
  bool numerical_failure_ = false;
};

fs::path output_dir(const OutputSpec& out) {
  const char* env = std::getenv("ISOFLOW_OUT");
  fs::path dir = (env && *env) ? fs::path(env) : fs::path(out.directory);
  fs::create_directories(dir);
  return dir;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  w(os);
}

FamilyTag family_of(const CheckSpec& c) { return parse_family(c.params.at("family")); }

std::size_t leading_of(const std::vector<CheckSpec>& checks) {
  for (const auto& c : checks)
    if (c.name == "isospectrality_drift" && c.params.contains("leading"))
      return c.params.at("leading").get<std::size_t>();
  return 5;
}

int cmd_run(const std::string& path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = parse_run_config(load_config(path));
  const fs::path dir = output_dir(cfg.output);
  const int digits = cfg.output.precision;
  const auto& alg = cfg.algebra;
  const auto& rep = cfg.representation;

  Reporter report(err);
  Trajectory traj;
  bool have_traj = true;
  try {
    traj = integrate(alg, cfg.initial, cfg.flow.policy, cfg.flow.dt, cfg.flow.t_end,
                     cfg.flow.record_every);
  } catch (const IntegrationBlowup& e) {
    err << "integration failed: " << e.what() << '\n';
    traj = {e.last_good()};
    have_traj = false;
    report.mark_failure();
  }

  write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj, digits); });
  const std::size_t leading = leading_of(cfg.checks);
  write_file(dir / "spectrum.csv", [&](std::ostream& os) {
    csv::write_row(os, {"t", "index", "lambda"});
    for (const auto& smp : traj) {
      const auto ev = tracked_spectrum(build_L(rep, alg, smp.r, smp.s), leading);
      for (std::size_t i = 0; i < ev.size(); ++i)
        csv::write_row(os, {csv::format_double(smp.t, digits), std::to_string(i),
                            csv::format_double(ev[i], digits)});
    }
  });

  for (const auto& c : cfg.checks) {
    const bool needs_traj = c.name != "recurrence_residual" && c.name != "lax_residual";
    if (needs_traj && !have_traj) {
      report.fail_unavailable(c, "trajectory unavailable after integration failure");
      continue;
    }
    if (c.name == "lax_residual") {
      report.add(c, [&] {
        double worst = 0.0;
        for (const auto& smp : traj) worst = std::max(worst, lax_residual(rep, alg, smp.r, smp.s, smp.u));
        const long extra = c.params.value("random_samples", 0L);
        Rng rng(cfg.seed);
        for (long k = 0; k < extra; ++k) {
          const double r = rng.uniform(-1.0, 1.0), s = rng.uniform(-1.0, 1.0);
          const double u = rng.uniform(-1.0, 1.0);
          worst = std::max(worst, lax_residual(rep, alg, r, s, u));
        }
        return worst;
      });
    } else if (c.name == "invariant_drift") {
      report.add(c, [&] {
        const double I0 = traj.front().invariant;
        double worst = 0.0;
        for (const auto& smp : traj)
          worst = std::max(worst, std::abs(smp.invariant - I0) / std::max(1.0, std::abs(I0)));
        return worst;
      });
    } else if (c.name == "isospectrality_drift") {
      report.add(c, [&] { return isospectrality_drift(traj, rep, alg, leading); });
    } else if (c.name == "sign_conditions") {
      report.add(c, [&] {
        const auto diag = check_sign_conditions(alg, cfg.initial, cfg.flow.policy, traj);
        if (!diag.pass) err << "sign conditions: " << diag.message << '\n';
        return diag.pass ? 0.0 : 1.0;
      });
    } else if (c.name == "modification_constancy") {
      report.add(c, [&] { return modification_report(traj, family_of(c)).max_constancy_deviation; });
    } else if (c.name == "modification_K") {
      report.add(c, [&] {
        return std::abs(modification_report(traj, family_of(c)).K_empirical -
                        c.params.at("expected").get<double>());
      });
    } else if (c.name == "recurrence_residual") {
      report.add(c, [&] {
        const double r = cfg.initial.r, s = cfg.initial.s;
        const double scale = 1.0 + build_L(rep, alg, r, s).norm_inf();
        const auto rows = c.params.at("rows").get<std::vector<long>>();
        double worst = 0.0;
        for (double x : c.params.at("points").get<std::vector<double>>())
          worst = std::max(worst,
                           eigenvector_residual(family_of(c), rep, alg, r, s, x, rows[0], rows[1]));
        return worst / scale;
      });
    }
  }

  write_file(dir / "report.csv", [&](std::ostream& os) { report.write(os, digits); });
  out << "wrote " << (dir / "report.csv").string() << '\n';
  return report.all_pass() ? 0 : 1;
}

int cmd_chain(const std::string& path, std::ostream& out, std::ostream& err) {
  const ChainConfig cfg = parse_chain_config(load_config(path));
  const fs::path dir = output_dir(cfg.output);
  const int digits = cfg.output.precision;
  const auto& pol = cfg.flow.policy;

  Reporter report(err);
  ChainTrajectory traj;
  bool have_traj = true;
  try {
    traj = integrate_chain(cfg.initial, pol, cfg.flow.dt, cfg.flow.t_end, cfg.flow.record_every);
  } catch (const Error& e) {
    err << "integration failed: " << e.what() << '\n';
    traj = {cfg.initial};
    have_traj = false;
    report.mark_failure();
  }
  write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_chain_csv(os, traj, digits); });
  write_file(dir / "spectrum.csv",
             [&](std::ostream& os) { write_chain_spectrum_csv(os, traj, digits); });

  const ChainState& s0 = cfg.initial;
  for (const auto& c : cfg.checks) {
    const bool needs_traj = c.name == "spectrum_drift" || c.name == "trace_drift" ||
                            c.name == "lax_residual";
    if (needs_traj && !have_traj) {
      report.fail_unavailable(c, "trajectory unavailable after integration failure");
      continue;
    }
    if (c.name == "spectrum_drift") {
      report.add(c, [&] { return chain_drift(traj).spectrum; });
    } else if (c.name == "trace_drift") {
      report.add(c, [&] {
        const auto d = chain_drift(traj);
        return std::max({d.tr2, d.tr3, d.tr4});
      });
    } else if (c.name == "lax_residual") {
      report.add(c, [&] {
        double worst = 0.0;
        for (const auto& st : traj)
          worst = std::max(worst, chain_lax_residual(st, chain_g(pol, st.t)).with_ML);
        return worst;
      });
    } else if (c.name == "eigenvalue_sum") {
      report.add(c, [&] { return std::abs(chain_spectrum(s0).trace_sum); });
    } else if (c.name == "christoffel_orthogonality") {
      report.add(c, [&] {
        const auto cw = christoffel_weights(s0);
        return std::max(cw.q_orthogonality, cw.dual_orthogonality);
      });
    } else if (c.name == "trace_closed_form") {
      report.add(c, [&] {
        const auto ti = trace_invariants(s0);
        return std::max({std::abs(ti.tr2_corrected - ti.tr2_dense),
                         std::abs(ti.tr3_closed - ti.tr3_dense),
                         std::abs(ti.tr4_closed - ti.tr4_dense)});
      });
    } else if (c.name == "pn_time_derivative") {
      report.add(c, [&] {
        const auto r = pn_time_derivative_check(s0, pol, c.params.value("h", 1e-4));
        return std::max(r.residual, r.polynomial);
      });
    }
  }
  write_file(dir / "report.csv", [&](std::ostream& os) { report.write(os, digits); });
  out << "wrote " << (dir / "report.csv").string() << '\n';
  return report.all_pass() ? 0 : 1;
}

int cmd_mvk(const std::string& path, std::ostream& out, std::ostream& err) {
  const MvkConfig cfg = parse_mvk_config(load_config(path));
  const fs::path dir = output_dir(cfg.output);
  const int digits = cfg.output.precision;
  const ChainState& st = cfg.state;

  Reporter report(err);
  MVKTable table;
  try {
    table = mvk_table(st, cfg.N);
  } catch (const Error& e) {
    err << "mvk table: " << e.what() << '\n';
    report.mark_failure();
  }
  write_file(dir / "mvk.csv", [&](std::ostream& os) { write_mvk_csv(os, table, digits); });

  for (const auto& c : cfg.checks) {
    if (table.count() == 0 && (c.name == "mvk_orthogonality" || c.name == "mvk_recurrence")) {
      report.fail_unavailable(c, "table unavailable");
      continue;
    }
    if (c.name == "mvk_orthogonality") {
      report.add(c, [&] {
        const auto o = mvk_orthogonality_check(table);
        return std::max(o.primal, o.dual);
      });
    } else if (c.name == "mvk_recurrence") {
      report.add(c, [&] { return mvk_recurrence_check(table, st); });
    } else if (c.name == "mvk_unit") {
      report.add(c, [&] { return mvk_unit_check(mvk_table(st, 1)); });
    } else if (c.name == "mvk_eigvec_derivative") {
      report.add(c, [&] {
        return mvk_time_derivative_check(st, cfg.policy, cfg.N, c.params.value("h", 1e-4)).eigvec;
      });
    } else if (c.name == "mvk_theorem_derivative") {
      report.add(c, [&] {
        return mvk_time_derivative_check(st, cfg.policy, cfg.N, c.params.value("h", 1e-4)).theorem;
      });
    } else if (c.name == "krawtchouk_reduction") {
      report.add(c, [&] {
        const auto k = krawtchouk_reduction_check(c.params.at("s").get<double>(),
                                                  c.params.at("r").get<double>(), st.d(), cfg.N);
        return std::max(k.residual_pn, k.residual_sum);
      });
    }
  }
  write_file(dir / "report.csv", [&](std::ostream& os) { report.write(os, digits); });
  out << "wrote " << (dir / "report.csv").string() << '\n';
  return report.all_pass() ? 0 : 1;
}

struct VerifyArgs {
  std::string only;
  std::vector<std::string> tol;
  std::uint64_t seed = SuiteOptions{}.seed;
  std::string report;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  SuiteOptions opts;
  opts.seed = a.seed;
  if (!a.only.empty()) opts.only_group = a.only;
  for (const auto& item : a.tol) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      err << "--tol expects name=value, got '" << item << "'\n";
      return 2;
    }
    const std::string value = item.substr(eq + 1);
    std::istringstream is(value);
    is.imbue(std::locale::classic());
    double v = 0.0;
    if (!(is >> v) || !is.eof()) {
      err << "--tol " << item.substr(0, eq) << ": '" << value << "' is not a number\n";
      return 2;
    }
    opts.tolerance_overrides[item.substr(0, eq)] = v;
  }
  std::vector<CriterionResult> results;
  try {
    results = run_acceptance(opts);
  } catch (const ConfigurationError& e) {
    err << "verify: " << e.what() << '\n';
    return 2;
  }
  print_table(out, results);
  out << '\n';
  print_summary(out, results);
  const bool ok = all_pass(results);
  out << (ok ? "all criteria pass" : "some criteria FAIL") << '\n';

  std::string report = a.report;
  if (report.empty()) {
    const char* env = std::getenv("ISOFLOW_OUT");
    if (env && *env) {
      fs::create_directories(env);
      report = (fs::path(env) / "report.csv").string();
    }
  }
  if (!report.empty()) write_file(report, [&](std::ostream& os) { write_report_csv(os, results); });
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"isoflow: isospectral flows on Lie algebra representations"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "integrate a g(a,b) flow and evaluate configured checks");
  run->add_option("config", config, "JSON configuration")->required();
  auto* chain = app.add_subcommand("chain", "integrate an sl(d+1) Toda-type chain");
  chain->add_option("config", config, "JSON configuration")->required();
  auto* mvk = app.add_subcommand("mvk", "build a multivariable Krawtchouk table");
  mvk->add_option("config", config, "JSON configuration")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::string groups;
  for (const auto& g : acceptance_groups()) groups += (groups.empty() ? "" : ", ") + g;
  verify->add_option("--only", va.only, "run one group: " + groups);
  verify->add_option("--tol", va.tol, "override a tolerance, name=value (repeatable)");
  verify->add_option("--seed", va.seed, "seed for the random states");
  verify->add_option("--report", va.report, "write check,value,tolerance,pass CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (*verify) return cmd_verify(va, out, err);
    if (*run) return cmd_run(config, out, err);
    if (*chain) return cmd_chain(config, out, err);
    if (*mvk) return cmd_mvk(config, out, err);
  } catch (const SchemaError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace isoflow::cli
