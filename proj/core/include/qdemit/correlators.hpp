#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qdemit/engine.hpp"
#include "qdemit/figures.hpp"

namespace qdemit {

// Pulse-train-averaged correlation curves and figures of merit for one
// propagation mode at one (temperature, coupling) point. Averages run over
// the second pulse period with trapezoid weights on the strided nodes.
struct PointCurves {
  std::vector<cplx> avg_g1;      // <s+(t+tau) s-(t)>, tau grid
  std::vector<double> avg_g2;    // <s+ s+ s- s->, clipped at zero
  std::vector<double> avg_hom;   // two-source coincidence curve, clipped
  std::vector<double> occ_line;  // single-time occupation trajectory
  double purity = 0.0;
  double indistinguishability = 0.0;
  double brightness = 0.0;
  double occ_after_pulse = 0.0;  // occupation at t0 + 5 sigma
  double g2_min = 0.0;           // most negative raw value before clipping
  double hom_min = 0.0;
  double cs_excess = 0.0;        // max of |G1|^2 - occ(t) occ(t+tau)
  InvariantStats stats;
};

struct PointResult {
  std::map<std::string, PointCurves> modes;
  double n_measure = 0.0;        // divisibility-violation measure
  bool n_computed = false;
  double dt_ps = 0.0;
  int n_c = 0;
  int stride = 0;
};

struct PointOptions {
  bool with_blp = true;
  const EtaTable* eta = nullptr;  // precomputed influence table
  std::string dump_dir;           // when set, write decimated two-time grids
};

// modes drawn from {"exact", "qrt", "pme"}; exact and qrt share one path
// engine, the polaron master equation runs its own propagation
PointResult run_point(const RunConfig& cfg, const std::vector<std::string>& modes,
                      const PointOptions& opt = {});

// trapezoid node weights over [i_lo, i_hi] with spacing stride
std::vector<int> emission_nodes(const RunConfig& cfg);
int tau_points(const RunConfig& cfg);

// decimated two-time grid record for optional dumps
struct GridDumpRow {
  double t_ps = 0.0;
  double tau_ps = 0.0;
  cplx g1;
  double g2 = 0.0;
  double hom = 0.0;
};

// pulse-train averaging shared by every mode: `fill(i_t, g1, g2)` writes the
// two correlation rows for emission step i_t; figures integrate the raw
// averages while the exported curves are floored at zero
using RowFill = std::function<void(int i_t, std::vector<cplx>&, std::vector<cplx>&)>;
PointCurves assemble_curves(const RunConfig& cfg, const std::vector<double>& occ_line,
                            const RowFill& fill, std::vector<GridDumpRow>* dump = nullptr);

}  // namespace qdemit
