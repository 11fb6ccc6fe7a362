#pragma once

#include <map>
#include <vector>

#include "qdemit/config.hpp"
#include "qdemit/correlators.hpp"
#include "qdemit/liouville.hpp"
#include "qdemit/model.hpp"

namespace qdemit {

// Time-convolutionless master equation in the polaron frame. The drive is
// renormalized by the thermal bath average; phonon-assisted rates are
// integrated over the bath correlation support at the instantaneous Rabi
// frequency. Emission correlators are dressed by the bath phase so that the
// zero-coupling limit reduces exactly to the bare decaying emitter.
class PmeEngine {
 public:
  explicit PmeEngine(const RunConfig& cfg);

  const BathTables& bath_tables() const { return tables_; }
  double dt() const { return cfg_.grid.dt_ps; }
  int nsteps() const { return nsteps_; }
  double bbar() const { return tables_.bbar(); }

  // generator at the window-cell midpoint, held constant across the cell
  Mat4 generator(double t_ps) const;
  // substepped fourth-order map for one dt cell starting at step k
  Mat4 step_map(int k) const;

  TimeLine t_line();
  const TimeLine& line() const { return line_; }

  // tau row of a seeded state, readouts of the coherence and occupation
  void evolve_row(const Vec4& seed, int i_t, int ntau, std::vector<cplx>& gx,
                  std::vector<cplx>& occ) const;

  PointCurves point_curves(std::vector<GridDumpRow>* dump = nullptr);

 private:
  void build();
  Vec4 stretch(const Vec4& v, int steps) const;

  RunConfig cfg_;
  BathTables tables_;
  int nsteps_ = 0;
  double d_ = 1.0;
  cplx h_step_{1.0, 0.0};  // free coherence factor per step
  std::vector<std::pair<int, int>> windows_;
  // per-cell in-window maps, wmaps_[w][j] carries step a+j to step a+j+1
  std::vector<std::vector<Mat4>> wmaps_;
  // rate-integral grid over the bath correlation support
  std::vector<double> tf_;
  std::vector<double> tfw_;   // trapezoid weights
  std::vector<cplx> lam_x_;   // Bbar^2 (cosh phi - 1)
  std::vector<cplx> lam_y_;   // Bbar^2 sinh phi
  std::vector<cplx> dress_;   // exp(phi(tau)) Bbar^2 on the tau grid
  bool line_done_ = false;
  TimeLine line_;
};

}  // namespace qdemit
