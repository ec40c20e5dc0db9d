#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kecone/abelian.hpp"
#include "kecone/types.hpp"

namespace kecone::report {

struct ProbeConfig {
  double epsilon = 0.1;
  double ray_x1 = 0.25;     // base point, first real lattice coordinate
  double ray_arg_eta = 0.3;
  double s_lo = -30.0;
  double s_hi = -2.0;
  int samples = 25;
};

struct ToolkitConfig {
  abelian::PeriodData pd;
  double tier2 = 1e-6;  // second-derivative checks
  double tier4 = 1e-3;  // fourth-derivative (Ricci) checks
  int samples = 100;
  std::uint64_t seed = 0;
  double s_range_lo = -50.0;
  double s_range_hi = -1.5;
  double C = 0.0;
  double c_norm = 0.0;  // 0 means the default (n+2)^{n+1}
  ProbeConfig probe;
  std::string report_path = "report.json";
  std::string csv_dir = ".";

  double effective_c_norm() const;
};

// Loads and validates the flat JSON config; throws ConfigError naming the
// first offending key.
ToolkitConfig load_config(const std::string& path);
ToolkitConfig parse_config(const std::string& json_text);

// Canonical serialization (sorted keys) and its FNV-1a digest, recorded in
// reports for reproducibility.
std::string canonical_config(const ToolkitConfig& cfg);
std::string config_digest(const ToolkitConfig& cfg);

}  // namespace kecone::report
