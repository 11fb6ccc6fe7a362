#include <doctest.h>

#include <cmath>
#include <complex>

#include "qdemit/influence.hpp"
#include "qdemit/model.hpp"

using namespace qdemit;
using cplx = std::complex<double>;

namespace {

BathTables tables_at(double lambda, double temperature_K) {
  BathParams b;
  b.lambda = lambda;
  b.temperature_K = temperature_K;
  return BathTables(b);
}

// independent cubature: nested Gauss rules of a different order than the
// production tensor rule, integrating the raw cell definitions
cplx brute_diag(const BathTables& t, double dt, int order) {
  const QuadratureRule outer = gauss_legendre(order, 0.0, dt);
  cplx acc = 0.0;
  for (size_t i = 0; i < outer.nodes.size(); ++i) {
    const double s = outer.nodes[i];
    const QuadratureRule inner = gauss_legendre(order, 0.0, s);
    cplx row = 0.0;
    for (size_t j = 0; j < inner.nodes.size(); ++j)
      row += inner.weights[j] * t.corr(s - inner.nodes[j]);
    acc += outer.weights[i] * row;
  }
  return acc;
}

cplx brute_off(const BathTables& t, double dt, int k, int order) {
  const QuadratureRule outer = gauss_legendre(order, k * dt, (k + 1) * dt);
  const QuadratureRule inner = gauss_legendre(order, 0.0, dt);
  cplx acc = 0.0;
  for (size_t i = 0; i < outer.nodes.size(); ++i) {
    cplx row = 0.0;
    for (size_t j = 0; j < inner.nodes.size(); ++j)
      row += inner.weights[j] * t.corr(outer.nodes[i] - inner.nodes[j]);
    acc += outer.weights[i] * row;
  }
  return acc;
}

}  // namespace

TEST_SUITE_BEGIN("influence");

TEST_CASE("eta cells match frozen adaptive-quadrature references") {
  const BathTables t = tables_at(1.0, 4.0);
  const EtaTable eta = compute_eta_table(t, 0.5, 7);
  REQUIRE(eta.off.size() == 7);
  CHECK(eta.diag.real() == doctest::Approx(6.2646515604e-02).epsilon(1e-8));
  CHECK(eta.diag.imag() == doctest::Approx(-3.4225357589e-02).epsilon(1e-8));
  CHECK(eta.off[0].real() == doctest::Approx(1.0963085968e-02).epsilon(1e-7));
  CHECK(eta.off[0].imag() == doctest::Approx(-1.0383065653e-01).epsilon(1e-8));
  CHECK(eta.off[1].real() == doctest::Approx(-6.4678533110e-02).epsilon(1e-8));
  CHECK(eta.off[1].imag() == doctest::Approx(-1.4304050782e-02).epsilon(1e-7));
}

TEST_CASE("eta cells match brute-force 2-d cubature") {
  const BathTables t = tables_at(1.0, 4.0);
  const double dt = 0.5;
  const EtaTable eta = compute_eta_table(t, dt, 7);
  const cplx bd = brute_diag(t, dt, 48);
  CHECK(std::abs(eta.diag - bd) / std::abs(bd) < 1e-6);
  for (int k = 1; k <= 7; ++k) {
    const cplx bo = brute_off(t, dt, k, 48);
    CHECK(std::abs(eta.off[static_cast<size_t>(k - 1)] - bo) / std::abs(bo) < 1e-6);
  }
}

TEST_CASE("halved steps recombine into the coarse cells") {
  const BathTables t = tables_at(1.0, 4.0);
  const double dt = 0.5;
  const EtaTable c = compute_eta_table(t, dt, 4);
  const EtaTable f = compute_eta_table(t, dt / 2.0, 9);
  // coarse triangle = two fine triangles plus the first fine rectangle
  CHECK(std::abs(c.diag - (2.0 * f.diag + f.off[0])) < 1e-8);
  // coarse rectangle at lag k = fine rectangles at lags 2k-1, 2k, 2k, 2k+1
  for (int k = 1; k <= 4; ++k) {
    const cplx combo = f.off[static_cast<size_t>(2 * k - 2)] +
                       2.0 * f.off[static_cast<size_t>(2 * k - 1)] +
                       f.off[static_cast<size_t>(2 * k)];
    CHECK(std::abs(c.off[static_cast<size_t>(k - 1)] - combo) < 1e-8);
  }
}

TEST_CASE("eta is linear in the coupling") {
  const EtaTable e1 = compute_eta_table(tables_at(1.0, 4.0), 0.5, 5);
  const EtaTable e2 = compute_eta_table(tables_at(2.0, 4.0), 0.5, 5);
  CHECK(std::abs(e2.diag - 2.0 * e1.diag) < 1e-12);
  for (size_t k = 0; k < e1.off.size(); ++k)
    CHECK(std::abs(e2.off[k] - 2.0 * e1.off[k]) < 1e-12);
}

TEST_CASE("memory window captures the correlation tail") {
  const EtaTable eta = compute_eta_table(tables_at(1.0, 4.0), 0.5, 7);
  CHECK(eta.tail_small());
  const EtaTable shallow = compute_eta_table(tables_at(1.0, 4.0), 0.5, 2);
  CHECK_FALSE(shallow.tail_small());
}

TEST_CASE("weights follow the path-pair exponents") {
  const EtaTable eta = compute_eta_table(tables_at(1.0, 4.0), 0.5, 7);
  const InfluenceWeights w = influence_weights(eta);
  REQUIRE(w.wm.size() == 6);
  CHECK(w.w0[0] == cplx(1.0));
  CHECK(w.w0[3] == cplx(1.0));
  CHECK(std::abs(w.w0[1] - std::exp(-std::conj(eta.diag))) < 1e-15);
  CHECK(std::abs(w.w0[2] - std::exp(-eta.diag)) < 1e-15);
  for (int m = 1; m <= 6; ++m) {
    const cplx em = eta.off[static_cast<size_t>(m - 1)];
    CHECK(std::abs(w.wm_at(m, 1, 1) - std::exp(-std::conj(em))) < 1e-15);
    CHECK(std::abs(w.wm_at(m, 2, 2) - std::exp(-em)) < 1e-15);
    CHECK(std::abs(w.wm_at(m, 1, 3) - std::exp(cplx(0.0, 2.0 * em.imag()))) < 1e-15);
    // populations carry no self phase
    CHECK(w.wm_at(m, 0, 0) == cplx(1.0));
    CHECK(w.wm_at(m, 3, 3) == cplx(1.0));
  }
  // saturated coherence self weight is the product over all retained lags
  cplx sat = w.w0[1];
  for (int m = 1; m <= 6; ++m) sat *= w.wm_at(m, 1, 1);
  CHECK(std::abs(w.sat_gx() - sat) < 1e-15);
}

TEST_CASE("zero coupling gives unit weights") {
  const EtaTable eta = compute_eta_table(tables_at(0.0, 4.0), 0.5, 3);
  CHECK(std::abs(eta.diag) == 0.0);
  const InfluenceWeights w = influence_weights(eta);
  for (int l = 0; l < 4; ++l) CHECK(w.w0[static_cast<size_t>(l)] == cplx(1.0));
  CHECK(std::abs(w.sat_gx() - cplx(1.0)) == 0.0);
}

TEST_SUITE_END();
