#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isoflow {

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool at_least = false;  // pass iff value >= tolerance instead of value <= tolerance
  bool pass = false;
  bool informational = false;  // reported, does not affect the verdict
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  std::vector<CheckRow> rows;
  bool pass = false;
  std::string error;  // set when the criterion threw
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  std::optional<std::string> only_group;
  // Tolerance overrides by row name; each must be finite and > 0.
  std::map<std::string, double> tolerance_overrides;
};

std::vector<std::string> acceptance_groups();

// Runs criteria 1-12. Throws ConfigurationError for an unknown group,
// unknown override name or non-positive tolerance.
std::vector<CriterionResult> run_acceptance(const SuiteOptions& options);

bool all_pass(const std::vector<CriterionResult>& results);

// One line per criterion.
void print_summary(std::ostream& os, const std::vector<CriterionResult>& results);
// One line per check row.
void print_table(std::ostream& os, const std::vector<CriterionResult>& results);
// check,value,tolerance,pass
void write_report_csv(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace isoflow
