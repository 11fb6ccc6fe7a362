#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qdemit/model.hpp"

namespace qdemit {

// Discretized bath influence coefficients on the uniform dt grid.
// diag is the self interaction of one time cell,
//   eta_0 = int_0^dt ds int_0^s ds' C(s - s'),
// off[k-1] couples cells k steps apart, k = 1..n_c,
//   eta_k = int_{k dt}^{(k+1) dt} ds int_0^dt ds' C(s - s').
// off has n_c entries; the last one only feeds the truncation-tail check.
struct EtaTable {
  double dt = 0.0;
  int n_c = 0;
  std::complex<double> diag;
  std::vector<std::complex<double>> off;

  // |off[n_c-1]| < 0.01 |diag|, memory window long enough
  bool tail_small() const;
};

// tensor-product Gauss integration of C over the cells, order 16 per axis
EtaTable compute_eta_table(const BathTables& tables, double dt, int n_c);

// Per-step influence weights over Liouville indices l = 2 ket + bra,
// basis order [GG, GX, XG, XX].
//   w0[l]        self weight of a newly added slice
//   wm[m-1][l,l'] coupling of the new slice l to the slice m steps older l'
struct InfluenceWeights {
  std::array<std::complex<double>, 4> w0{};
  std::vector<std::array<std::complex<double>, 16>> wm;  // n_c - 1 matrices

  std::complex<double> wm_at(int m, int l_new, int l_old) const {
    return wm[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(4 * l_new + l_old)];
  }
  // saturated self-coupling of a frozen GX coherence,
  // w0[GX] * prod_m wm[m][GX, GX]
  std::complex<double> sat_gx() const;
};

InfluenceWeights influence_weights(const EtaTable& eta);

}  // namespace qdemit
