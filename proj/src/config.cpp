#include "kecone/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kecone::report {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(std::string("missing config key: ") + key);
  }
  return *it;
}

RMat parse_matrix(const json& j, int n, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigError(std::string(key) + " must be an n x n array");
  }
  RMat m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) {
      throw ConfigError(std::string(key) + " must be an n x n array");
    }
    for (int c = 0; c < n; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

RVec parse_vector(const json& j, int n, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigError(std::string(key) + " must have length n");
  }
  RVec v(n);
  for (int k = 0; k < n; ++k) v[k] = j[k].get<double>();
  return v;
}

}  // namespace

double ToolkitConfig::effective_c_norm() const {
  if (c_norm > 0.0) return c_norm;
  double r = 1.0;
  for (int i = 0; i < pd.n + 1; ++i) r *= (pd.n + 2);
  return r;
}

ToolkitConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ToolkitConfig cfg;
  const json& pdj = require(j, "period_data");
  const int n = require(pdj, "n").get<int>();
  if (n < 1) throw ConfigError("period_data.n must be >= 1");
  const json& dj = require(pdj, "delta");
  if (!dj.is_array() || static_cast<int>(dj.size()) != n) {
    throw ConfigError("period_data.delta must have length n");
  }
  IVec delta(n);
  for (int k = 0; k < n; ++k) delta[k] = dj[k].get<int>();
  const RMat z_re = parse_matrix(require(pdj, "Z_re"), n, "period_data.Z_re");
  const RMat z_im = parse_matrix(require(pdj, "Z_im"), n, "period_data.Z_im");
  const RVec t_re = parse_vector(require(pdj, "t_re"), n, "period_data.t_re");
  const RVec t_im = parse_vector(require(pdj, "t_im"), n, "period_data.t_im");
  if ((z_re - z_re.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      (z_im - z_im.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("period_data: Z not symmetric");
  }
  CMat Z(n, n);
  CVec t(n);
  for (int r = 0; r < n; ++r) {
    t[r] = Complex(t_re[r], t_im[r]);
    for (int c = 0; c < n; ++c) Z(r, c) = Complex(z_re(r, c), z_im(r, c));
  }
  try {
    cfg.pd = abelian::make_period_data(n, delta, Z, t);
    abelian::validate_period_data(cfg.pd);
  } catch (const InvalidPeriodData& e) {
    throw ConfigError(std::string("period_data: ") + e.what());
  }

  if (!j.contains("seed")) {
    throw ConfigError("missing config key: seed (reproducibility mandatory)");
  }
  cfg.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("tolerances")) {
    const json& tj = j["tolerances"];
    if (tj.contains("tier2")) cfg.tier2 = tj["tier2"].get<double>();
    if (tj.contains("tier4")) cfg.tier4 = tj["tier4"].get<double>();
  }
  if (!(cfg.tier2 > 0.0) || !(cfg.tier4 > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (j.contains("s_range")) {
    const json& sj = j["s_range"];
    if (!sj.is_array() || sj.size() != 2) {
      throw ConfigError("s_range must be [lo, hi]");
    }
    cfg.s_range_lo = sj[0].get<double>();
    cfg.s_range_hi = sj[1].get<double>();
    if (!(cfg.s_range_lo < cfg.s_range_hi) || !(cfg.s_range_hi < 0.0)) {
      throw ConfigError("s_range must satisfy lo < hi < 0");
    }
  }
  if (j.contains("C")) cfg.C = j["C"].get<double>();
  if (j.contains("c_norm")) cfg.c_norm = j["c_norm"].get<double>();
  if (j.contains("probe")) {
    const json& pj = j["probe"];
    if (pj.contains("epsilon")) cfg.probe.epsilon = pj["epsilon"].get<double>();
    if (pj.contains("samples")) cfg.probe.samples = pj["samples"].get<int>();
    if (pj.contains("ray")) {
      const json& rj = pj["ray"];
      if (rj.contains("x1")) cfg.probe.ray_x1 = rj["x1"].get<double>();
      if (rj.contains("arg_eta"))
        cfg.probe.ray_arg_eta = rj["arg_eta"].get<double>();
      if (rj.contains("s_lo")) cfg.probe.s_lo = rj["s_lo"].get<double>();
      if (rj.contains("s_hi")) cfg.probe.s_hi = rj["s_hi"].get<double>();
    }
  }
  if (j.contains("output")) {
    const json& oj = j["output"];
    if (oj.contains("report")) cfg.report_path = oj["report"].get<std::string>();
    if (oj.contains("csv_dir")) cfg.csv_dir = oj["csv_dir"].get<std::string>();
  }
  return cfg;
}

ToolkitConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const ToolkitConfig& cfg) {
  ordered_json j;
  j["C"] = cfg.C;
  j["c_norm"] = cfg.c_norm;
  ordered_json pdj;
  pdj["n"] = cfg.pd.n;
  pdj["delta"] = std::vector<int>(cfg.pd.delta.data(),
                                  cfg.pd.delta.data() + cfg.pd.n);
  auto mat = [&](const RMat& m) {
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < m.rows(); ++r) {
      rows.emplace_back(m.row(r).begin(), m.row(r).end());
    }
    return rows;
  };
  pdj["Z_re"] = mat(cfg.pd.Z.real());
  pdj["Z_im"] = mat(cfg.pd.Z.imag());
  std::vector<double> tre, tim;
  for (int k = 0; k < cfg.pd.n; ++k) {
    tre.push_back(cfg.pd.t[k].real());
    tim.push_back(cfg.pd.t[k].imag());
  }
  pdj["t_re"] = tre;
  pdj["t_im"] = tim;
  j["period_data"] = pdj;
  j["probe"] = {{"epsilon", cfg.probe.epsilon},
                {"ray_x1", cfg.probe.ray_x1},
                {"ray_arg_eta", cfg.probe.ray_arg_eta},
                {"s_lo", cfg.probe.s_lo},
                {"s_hi", cfg.probe.s_hi},
                {"samples", cfg.probe.samples}};
  j["s_range"] = {cfg.s_range_lo, cfg.s_range_hi};
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tolerances"] = {{"tier2", cfg.tier2}, {"tier4", cfg.tier4}};
  return j.dump();
}

std::string config_digest(const ToolkitConfig& cfg) {
  const std::string s = canonical_config(cfg);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace kecone::report
