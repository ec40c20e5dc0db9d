#pragma once

#include <string>
#include <vector>

#include "kecone/config.hpp"

namespace kecone::report {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  double wall_time = 0.0;  // seconds
  std::string note;        // error message on failure, extra data otherwise
};

struct CheckReport {
  std::string toolkit = "kecone";
  std::string version;
  std::string config_digest;
  std::vector<CheckResult> checks;
  bool overall_pass = false;
};

// Suite selectors accepted by run_suite and the CLI.
const std::vector<std::string>& suite_names();

// Runs the selected checks deterministically under the config seed.
// Module errors become failed checks, never a crash of the suite.
CheckReport run_suite(const ToolkitConfig& cfg, const std::string& selector);

// JSON with canonical key order; CSV summary with one row per check.
std::string report_to_json(const CheckReport& rep);
void emit_json(const CheckReport& rep, const std::string& path);
void emit_csv(const CheckReport& rep, const std::string& path);

// Reports are compared excluding wall times (the determinism contract).
bool reports_equal_modulo_time(const CheckReport& a, const CheckReport& b);

}  // namespace kecone::report
