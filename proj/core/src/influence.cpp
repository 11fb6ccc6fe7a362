#include "qdemit/influence.hpp"

#include <cmath>
#include <stdexcept>

namespace qdemit {

namespace {

constexpr int kCellOrder = 16;

// Liouville index decomposition, l = 2 ket + bra
constexpr double kKet[4] = {0.0, 0.0, 1.0, 1.0};
constexpr double kBra[4] = {0.0, 1.0, 0.0, 1.0};

}  // namespace

bool EtaTable::tail_small() const {
  if (off.empty()) return true;
  return std::abs(off.back()) < 0.01 * std::abs(diag);
}

EtaTable compute_eta_table(const BathTables& tables, double dt, int n_c) {
  if (dt <= 0.0) throw std::invalid_argument("compute_eta_table: dt must be > 0");
  if (n_c < 1) throw std::invalid_argument("compute_eta_table: n_c must be >= 1");
  EtaTable t;
  t.dt = dt;
  t.n_c = n_c;
  QuadratureRule g = gauss_legendre(kCellOrder, 0.0, 1.0);

  // self cell over the triangle 0 <= s' <= s <= dt, mapped by s' = s u
  {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < kCellOrder; ++i) {
      const double s = dt * g.nodes[static_cast<std::size_t>(i)];
      const double ws = dt * g.weights[static_cast<std::size_t>(i)];
      for (int j = 0; j < kCellOrder; ++j) {
        const double u = g.nodes[static_cast<std::size_t>(j)];
        const double wu = g.weights[static_cast<std::size_t>(j)];
        acc += ws * wu * s * tables.corr(s * (1.0 - u));
      }
    }
    t.diag = acc;
  }

  // rectangle cells [k dt, (k+1) dt] x [0, dt]
  t.off.resize(static_cast<std::size_t>(n_c));
  for (int k = 1; k <= n_c; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < kCellOrder; ++i) {
      const double s = dt * (k + g.nodes[static_cast<std::size_t>(i)]);
      const double ws = dt * g.weights[static_cast<std::size_t>(i)];
      for (int j = 0; j < kCellOrder; ++j) {
        const double sp = dt * g.nodes[static_cast<std::size_t>(j)];
        const double wp = dt * g.weights[static_cast<std::size_t>(j)];
        acc += ws * wp * tables.corr(s - sp);
      }
    }
    t.off[static_cast<std::size_t>(k - 1)] = acc;
  }
  return t;
}

std::complex<double> InfluenceWeights::sat_gx() const {
  std::complex<double> f = w0[1];
  for (const auto& m : wm) f *= m[4 * 1 + 1];
  return f;
}

InfluenceWeights influence_weights(const EtaTable& eta) {
  InfluenceWeights w;
  for (int l = 0; l < 4; ++l) {
    const double dk = kKet[l] - kBra[l];
    const std::complex<double> e =
        eta.diag * kKet[l] - std::conj(eta.diag) * kBra[l];
    w.w0[static_cast<std::size_t>(l)] = std::exp(-dk * e);
  }
  const int n_c = eta.n_c;
  w.wm.resize(static_cast<std::size_t>(n_c > 0 ? n_c - 1 : 0));
  for (int m = 1; m < n_c; ++m) {
    const std::complex<double> em = eta.off[static_cast<std::size_t>(m - 1)];
    auto& tbl = w.wm[static_cast<std::size_t>(m - 1)];
    for (int ln = 0; ln < 4; ++ln) {
      const double dk = kKet[ln] - kBra[ln];
      for (int lo = 0; lo < 4; ++lo) {
        const std::complex<double> e = em * kKet[lo] - std::conj(em) * kBra[lo];
        tbl[static_cast<std::size_t>(4 * ln + lo)] = std::exp(-dk * e);
      }
    }
  }
  return w;
}

}  // namespace qdemit
