#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "kecone/parallel.hpp"
#include "kecone/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kecone: numerical verification of two explicit "
               "Kahler-Einstein constructions"};

  std::string suite = "all";
  std::string config_path;
  std::string out_path;
  std::string csv_path;
  bool serial = false;
  std::uint64_t seed_override = 0;
  int samples_override = 0;
  double tier2_override = 0.0;
  double tier4_override = 0.0;

  std::string suites_help = "suite to run (all";
  for (const auto& s : kecone::report::suite_names()) suites_help += ", " + s;
  suites_help += ")";

  app.add_option("suite", suite, suites_help)->capture_default_str();
  app.add_option("--config", config_path, "config JSON path")->required();
  app.add_option("--out", out_path, "report JSON path (default from config)");
  app.add_option("--csv", csv_path, "also write a CSV summary here");
  app.add_option("--seed", seed_override, "override the config seed");
  app.add_option("--samples", samples_override, "override the sample count");
  app.add_option("--tol-tier2", tier2_override,
                 "override the second-derivative tolerance");
  app.add_option("--tol-tier4", tier4_override,
                 "override the Ricci-level tolerance");
  app.add_flag("--serial", serial, "disable OpenMP parallel loops");

  CLI11_PARSE(app, argc, argv);

  try {
    kecone::report::ToolkitConfig cfg =
        kecone::report::load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed_override;
    if (samples_override > 0) cfg.samples = samples_override;
    if (tier2_override > 0.0) cfg.tier2 = tier2_override;
    if (tier4_override > 0.0) cfg.tier4 = tier4_override;
    if (serial) kecone::par::parallel_enabled() = false;
    if (out_path.empty()) out_path = cfg.report_path;

    const kecone::report::CheckReport rep =
        kecone::report::run_suite(cfg, suite);
    kecone::report::emit_json(rep, out_path);
    if (!csv_path.empty()) kecone::report::emit_csv(rep, csv_path);

    for (const auto& c : rep.checks) {
      std::printf("%-28s %s  residual %.3e  (tol %.1e, %d samples, %.2fs)%s%s\n",
                  c.name.c_str(), c.passed ? "PASS" : "FAIL", c.max_residual,
                  c.tolerance, c.samples, c.wall_time,
                  c.note.empty() ? "" : "  ", c.note.c_str());
    }
    std::printf("overall: %s  (report: %s)\n",
                rep.overall_pass ? "PASS" : "FAIL", out_path.c_str());
    return rep.overall_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
