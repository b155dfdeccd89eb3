// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

// lab: command-line driver for the wmplab pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "wmp/cli/config.hpp"
#include "wmp/cli/pipeline.hpp"
#include "wmp/cli/report.hpp"
#include "wmp/cli/svg.hpp"

namespace {

using namespace wmp;
using namespace wmp::cli;

constexpr int kExitPass = 0;
constexpr int kExitFailures = 1;
constexpr int kExitError = 2;

/// One `--key value` flag per config key, applied after the config file and
/// the environment.
struct Overrides {
  std::map<std::string, std::string> values;

  void attach(CLI::App& app) {
    for (const auto& k : config_keys()) {
      app.add_option("--" + std::string(k.name), values[k.name], "override " + std::string(k.name));
    }
  }
  void apply(RunConfig& cfg, CLI::App& app) const {
    for (const auto& [key, value] : values) {
      if (app.count("--" + key) > 0) set_key(cfg, key, value);
    }
    validate(cfg);
  }
};

RunConfig resolve(const std::string& path, const Overrides& ov, CLI::App& app) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  apply_environment(cfg);
  ov.apply(cfg, app);
  return cfg;
}

void print_verdicts(const ReportBundle& b) {
  for (const auto& v : b.verdicts) {
    std::printf("%-28s %s  %s\n", v.name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
  }
  for (const auto& n : b.notes) std::printf("note: %s\n", n.c_str());
}

void write_outputs(const ReportBundle& b) {
  std::filesystem::path dir(b.config.output_dir);
  emit_report(b, Format::Json, dir);
  emit_report(b, Format::Csv, dir);
  write_file(dir / "config.txt", serialize_config(b.config));
  for (PlotKind k : {PlotKind::ReturnMap, PlotKind::NestedIntervals, PlotKind::DeltaTrend}) {
    try {
      write_file(dir / (std::string(to_string(k)) + ".svg"), plot_svg(b, k));
    } catch (const EmptyTable& e) {
      std::fprintf(stderr, "skipping %s.svg: %s\n", to_string(k), e.what());
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall_seconds=%.3f\n", b.wall_seconds);
  write_file(dir / "timing.txt", buf);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wmplab: return maps, Koebe space and transfer ranges of unimodal maps"};
  app.require_subcommand(1);

  std::string run_path;
  Overrides run_ov;
  auto* run = app.add_subcommand("run", "Run the full pipeline and write reports and figures");
  run->add_option("config", run_path, "config file (key=value)")->required();
  run_ov.attach(*run);

  std::string orbit_a = "0.975", orbit_alpha = "2", orbit_x = "0.5";
  int orbit_n = 10, orbit_bits = 256, orbit_digits = 30;
  auto* orbit = app.add_subcommand("orbit", "Print the orbit of a point");
  orbit->add_option("--a", orbit_a, "height a");
  orbit->add_option("--alpha", orbit_alpha, "critical order");
  orbit->add_option("--x", orbit_x, "starting point");
  orbit->add_option("--n", orbit_n, "number of iterates")->check(CLI::NonNegativeNumber);
  orbit->add_option("--bits", orbit_bits, "working precision");
  orbit->add_option("--digits", orbit_digits, "printed digits")->check(CLI::Range(2, 1000));

  std::string q_path;
  Overrides q_ov;
  auto* qtable = app.add_subcommand("qtable", "Print the closest-approach table as CSV");
  qtable->add_option("config", q_path, "config file");
  q_ov.attach(*qtable);

  std::string v_path;
  Overrides v_ov;
  auto* verify = app.add_subcommand("verify-wmp", "Run the pipeline and print verdicts only");
  verify->add_option("config", v_path, "config file");
  v_ov.attach(*verify);

  std::string p_path, p_kind, p_out;
  Overrides p_ov;
  auto* plot = app.add_subcommand("plot", "Run the pipeline and write one SVG figure");
  plot->add_option("config", p_path, "config file");
  plot->add_option("--kind", p_kind, "return_map, nested_intervals or delta_trend")->required();
  plot->add_option("--out", p_out, "output file (default <output.dir>/<kind>.svg)");
  p_ov.attach(*plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*run) {
      RunConfig cfg = resolve(run_path, run_ov, *run);
      ReportBundle b = run_pipeline(cfg);
      write_outputs(b);
      print_verdicts(b);
      std::printf("reports written to %s\n", cfg.output_dir.c_str());
      return b.passed() ? kExitPass : kExitFailures;
    }
    if (*orbit) {
      if (orbit_bits < 64) throw ConfigError("--bits must be >= 64");
      UnimodalMap map = UnimodalMap::from_decimal(orbit_alpha, orbit_a, orbit_bits);
      const double cost = precision_cost_bits(map, orbit_n);
      if (cost > orbit_bits - 64) {
        std::fprintf(stderr, "warning: %d iterates may lose %.0f of %d bits\n", orbit_n, cost,
                     orbit_bits);
      }
      auto pts = map.orbit(map.point(orbit_x), orbit_n);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        std::printf("%zu %s\n", k, pts[k].to_string(orbit_digits).c_str());
      }
      return kExitPass;
    }
    if (*qtable) {
      RunConfig cfg = resolve(q_path, q_ov, *qtable);
      UnimodalMap map = build_map(cfg);
      ReportBundle b;
      b.config = cfg;
      b.table = closest_approach(map, cfg.orbit_horizon);
      b.q_violations = q_table_violations(map, b.table);
      std::cout << to_csv(b).front().second;
      std::fprintf(stderr, "termination=%s precision_bits=%d violations=%zu\n",
                   to_string(b.table.termination), b.table.precision_bits, b.q_violations.size());
      return b.q_violations.empty() ? kExitPass : kExitFailures;
    }
    if (*verify) {
      RunConfig cfg = resolve(v_path, v_ov, *verify);
      ReportBundle b = run_pipeline(cfg);
      print_verdicts(b);
      return b.passed() ? kExitPass : kExitFailures;
    }
    if (*plot) {
      RunConfig cfg = resolve(p_path, p_ov, *plot);
      PlotKind kind = parse_plot_kind(p_kind);
      ReportBundle b = run_pipeline(cfg);
      std::filesystem::path out =
          p_out.empty() ? std::filesystem::path(cfg.output_dir) / (p_kind + ".svg")
                        : std::filesystem::path(p_out);
      if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
      write_file(out, plot_svg(b, kind));
      std::printf("%s\n", out.string().c_str());
      return kExitPass;
    }
  } catch (const PeriodicAttractorSuspected& e) {
    std::fprintf(stderr, "aborted: PeriodicAttractorSuspected: %s\n", e.what());
    return kExitError;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
