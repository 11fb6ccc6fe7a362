// Command line front end for the emitter pipeline: single points, full
// (temperature, coupling) sweeps, and grid-refinement reports.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdemit/config.hpp"
#include "qdemit/sweep.hpp"

namespace {

void print_rows(const std::vector<qdemit::SweepRow>& rows) {
  std::fputs(qdemit::results_csv_text(rows).c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laser-driven quantum-dot emitter simulator"};

  std::string config_path;
  std::string preset;
  std::string out_dir = "qdsim_out";
  std::vector<std::string> overrides;
  std::vector<std::string> modes;
  std::vector<double> point;
  bool do_sweep = false;
  bool do_converge = false;
  bool resume = false;
  int workers = 1;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--preset", preset, "grid preset: desk or accuracy")
      ->check(CLI::IsMember({"desk", "accuracy"}));
  app.add_option("--set", overrides, "override a field, e.g. --set bath.lambda=2")
      ->expected(-1);
  app.add_option("--modes", modes, "propagation modes to run (exact, qrt, pme)")
      ->expected(-1)
      ->delimiter(',');
  app.add_option("--point", point, "run one grid point: temperature_K lambda")
      ->expected(2);
  app.add_flag("--sweep", do_sweep, "run the full configured (T, lambda) grid");
  app.add_flag("--converge", do_converge, "run the grid-refinement ladder report");
  app.add_flag("--resume", resume, "reuse cached point results in --out");
  app.add_option("--workers", workers, "parallel grid points")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (results.csv, heatmaps, caches)");

  CLI11_PARSE(app, argc, argv);

  try {
    qdemit::RunConfig cfg;
    if (!config_path.empty()) cfg = qdemit::RunConfig::from_json_file(config_path);
    if (!preset.empty()) cfg.apply_preset(preset);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got: " + kv);
      cfg.set_field(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!modes.empty()) cfg.sweep.modes = modes;
    cfg.validate();

    if (do_converge) {
      std::fputs(qdemit::convergence_report(cfg, qdemit::default_ladder()).c_str(), stdout);
      return 0;
    }
    if (do_sweep) {
      const qdemit::SweepOutcome out = qdemit::run_sweep(cfg, out_dir, workers, resume);
      print_rows(out.rows);
      if (!out.results_path.empty())
        std::fprintf(stderr, "results written to %s\n", out.results_path.c_str());
      return out.all_ok ? 0 : 1;
    }
    if (point.size() == 2) {
      const qdemit::SweepOutcome out =
          qdemit::run_single_point(cfg, point[0], point[1], out_dir);
      print_rows(out.rows);
      return out.all_ok ? 0 : 1;
    }
    std::fputs(app.help().c_str(), stderr);
    std::fputs("nothing to do: pass --sweep, --point or --converge\n", stderr);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
