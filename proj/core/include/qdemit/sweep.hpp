#pragma once

#include <string>
#include <vector>

#include "qdemit/config.hpp"

namespace qdemit {

// One results.csv line. Numeric cells are invalid when `error` is set.
struct SweepRow {
  double temperature_K = 0.0;
  double lambda = 0.0;
  std::string mode;
  double purity = 0.0;
  double indistinguishability = 0.0;
  double brightness = 0.0;
  double q_p = 0.0;            // relative deviation from the exact purity
  double q_i = 0.0;
  bool has_q = false;          // only approximate modes next to an exact run
  double n_measure = 0.0;      // written on the exact row only
  bool has_n = false;
  double dt_ps = 0.0;
  int n_c = 0;
  int stride = 0;
  std::string error;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  bool all_ok = true;
  std::string results_path;    // empty when nothing was written
};

// Full (temperature, lambda) grid from cfg.sweep. Each grid point runs every
// requested mode; failures land in the row's error column and the sweep
// continues. Point results are cached under out_dir/points so an interrupted
// sweep resumes without recomputation and reproduces the same bytes.
SweepOutcome run_sweep(const RunConfig& cfg, const std::string& out_dir, int workers,
                       bool resume);

// one grid point, same row layout; no files are written when out_dir is empty
SweepOutcome run_single_point(const RunConfig& cfg, double temperature_K, double lambda,
                              const std::string& out_dir);

std::string results_csv_text(const std::vector<SweepRow>& rows);

// per-metric CSV matrices, temperature rows against lambda columns
void write_heatmaps(const RunConfig& cfg, const std::vector<SweepRow>& rows,
                    const std::string& out_dir);

struct ConvergenceRung {
  double dt_ps = 0.0;
  int n_c = 0;
  int stride = 0;
};

// default refinement ladder for the convergence report
std::vector<ConvergenceRung> default_ladder();

// exact-mode figures across the ladder at the configured bath point, with
// rung-to-rung deltas; the occupation after the first pulse anchors the
// drive discretization
std::string convergence_report(const RunConfig& cfg,
                               const std::vector<ConvergenceRung>& ladder);

}  // namespace qdemit
