#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdemit/adm.hpp"
#include "qdemit/config.hpp"
#include "qdemit/influence.hpp"
#include "qdemit/model.hpp"

namespace qdemit {

// Collapsed drive-free representation (pG, pX, cGX, cXG). Exact whenever the
// trajectory spent at least n_c steps in free decay, which the propagation
// ranges guarantee by construction.
using Rep = Vec4;

struct InvariantStats {
  double max_trace_dev = 0.0;
  double max_herm_dev = 0.0;
  double min_eig = 1.0;
  std::size_t steps = 0;
  void absorb(const StateChecks& c);
  void absorb(const InvariantStats& other);
};

// Reduced single-time trajectory, rows ordered [GG, GX, XG, XX].
struct TimeLine {
  std::vector<Vec4> red;
  std::vector<double> occ;
  InvariantStats stats;
};

// Evolution of the three basis objects across one drive window, used to carry
// synthesized correlation rows through a pulse without touching the tensor.
struct CrossingRef {
  int a = 0;        // first drive step of the window
  int k1 = 0;       // end of propagation including the memory flush
  int nw = 0;       // k1 - a rows
  // readouts after each step for seeds pG=1, pX=1, cGX=1
  std::vector<Vec4> g, x, gx;
  Rep g_out, x_out, gx_out;
};

// Correlation row along tau for one emission time: coherence readout
// (row_c) and occupation readout (row_o).
struct TauRow {
  std::vector<cplx> c;
  std::vector<cplx> o;
};

// Path-sum propagator of the laser-driven emitter with finite bath memory.
// Full tensor propagation runs only inside pulse windows plus their memory
// flush; drive-free stretches use closed-form kernels.
class PathEngine {
 public:
  explicit PathEngine(const RunConfig& cfg);
  PathEngine(const RunConfig& cfg, const EtaTable& eta);

  const RunConfig& config() const { return cfg_; }
  const BathTables& bath_tables() const { return tables_; }
  const EtaTable& eta() const { return eta_; }
  const InfluenceWeights& weights() const { return prop_->weights(); }

  double dt() const { return cfg_.grid.dt_ps; }
  int nsteps() const { return nsteps_; }
  // memory depth actually used; collapses to 1 when the coupling vanishes
  int n_c_eff() const { return n_c_eff_; }
  double decay_per_step() const { return d_; }
  cplx sat_factor() const { return f_sat_; }
  double polaron_shift() const { return tables_.polaron_shift(); }

  bool drive_enabled() const { return drive_enabled_; }
  void disable_drive();  // undriven map for the divisibility measure

  const std::vector<std::pair<int, int>>& windows() const { return windows_; }
  const std::vector<std::pair<int, int>>& full_ranges() const { return full_ranges_; }
  bool in_full_range(int step) const;
  // distance-n_c neighborhood of any drive window
  bool near_window(int step) const;

  const Mat4& step_matrix(int k) const;  // propagator for step k -> k+1

  // tau kernels for a coherence seeded into free decay:
  //   "exact"  bath memory of the pre-seed excited state retained
  //   "fresh"  restarted bath, no seed bookkeeping
  //   "qrt"    restarted bath with the seed slice self weight

  std::vector<cplx> kernel(const std::string& mode, int nmax) const;

  TimeLine t_line();
  const TimeLine& line() const { return line_; }

  // full tensor at a step inside a propagation range, rebuilt from the
  // range-entry representation recorded by t_line
  AdmTensor window_tensor_at(int step) const;

  // raw stepping helpers, also the reference path for tests
  void run_full(AdmTensor& a, int k0, int k1, std::vector<Vec4>* readouts = nullptr) const;

  Rep free_fill(std::vector<Vec4>* red, const Rep& rep, int k0, int k1) const;
  AdmTensor expand(const Rep& rep) const;
  Rep collapse(const AdmTensor& a) const;

  const std::vector<CrossingRef>& crossing_refs();

  // synthesized tau row for an object seeded at step i_t, valid row entries
  // begin after j0; herm mirrors cXG = conj(cGX) across stretches
  void synth_row(int i_t, int ntau, Rep rep, const std::vector<cplx>* kern, int j0,
                 TauRow& row, bool herm = false);

  // tau rows of the two seeded objects at emission step i_t:
  //   g1 tracks s^- rho, read out on the coherence
  //   g2 tracks s^- rho s^+, read out on the occupation
  struct ColumnPair {
    std::vector<cplx> g1;
    std::vector<cplx> g2;
  };
  // kernel-based column, exact for emission times at least n_c steps away
  // from every drive window
  ColumnPair kernel_column(int i_t, int ntau, const std::string& mode,
                           const std::vector<cplx>& kern);
  // tensor-based column for emission times near or inside a window
  ColumnPair real_column(int i_t, int ntau, const std::string& mode);

  InvariantStats& stats() { return stats_; }

 private:
  void build();
  void fill_rows_from_readouts(const std::vector<Vec4>& reads, int take, int j,
                               TauRow& row) const;

  RunConfig cfg_;
  BathTables tables_;
  EtaTable eta_;
  std::optional<AdmPropagator> prop_;
  int nsteps_ = 0;
  int n_c_eff_ = 1;
  double eps_ = 0.0;  // exciton level in the drive frame
  double d_ = 1.0;    // population decay per step
  cplx f_sat_{1.0, 0.0};
  bool drive_enabled_ = true;
  std::map<int, Mat4> props_;
  Mat4 m_free_;
  std::vector<std::pair<int, int>> windows_;
  std::vector<std::pair<int, int>> full_ranges_;
  std::vector<Rep> entry_reps_;  // collapsed state at each range start
  bool line_done_ = false;
  TimeLine line_;
  std::vector<CrossingRef> refs_;
  bool refs_done_ = false;
  InvariantStats stats_;
};

}  // namespace qdemit
