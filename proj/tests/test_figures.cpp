#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qdemit/figures.hpp"

using namespace qdemit;
using cplxd = std::complex<double>;

namespace {

// coincidence histogram on [0, 1.5*period] made of one interior spike per
// window; each spike has exact trapezoid area height*dt
std::vector<double> two_window_curve(double central, double side, double dt, double period) {
  const auto ic = static_cast<size_t>(std::llround(0.5 * period / dt));
  const auto iside = static_cast<size_t>(std::llround(1.5 * period / dt));
  std::vector<double> c(iside + 1, 0.0);
  c[ic / 2] = central;
  c[2 * ic] = side;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("figures");

TEST_CASE("trapezoid integrates linear data exactly") {
  const double dt = 0.25;
  std::vector<double> y(41);
  for (size_t i = 0; i < y.size(); ++i) y[i] = 3.0 + 2.0 * (static_cast<double>(i) * dt);
  // integral of 3 + 2t over [1, 9]
  CHECK(trapezoid(y, dt, 4, 36) == doctest::Approx(3.0 * 8.0 + 81.0 - 1.0).epsilon(1e-14));
  CHECK(trapezoid(y, dt, 7, 7) == 0.0);
  CHECK_THROWS_AS(trapezoid(y, dt, 0, 41), std::invalid_argument);
  CHECK_THROWS_AS(trapezoid(y, dt, 9, 3), std::invalid_argument);
}

TEST_CASE("window ratio gives closed-form purity values") {
  const double dt = 0.5, period = 100.0;
  // empty central window: perfect single-photon purity
  CHECK(purity(two_window_curve(0.0, 1.0, dt, period), dt, period) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // doubled central spike area equal to the side spike area: zero purity
  CHECK(purity(two_window_curve(1.0, 2.0, dt, period), dt, period) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // half ratio
  CHECK(purity(two_window_curve(1.0, 4.0, dt, period), dt, period) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(indistinguishability(two_window_curve(1.0, 4.0, dt, period), dt, period) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("window ratio rejects short or empty histograms") {
  const double dt = 0.5, period = 100.0;
  std::vector<double> short_curve(100, 1.0);
  CHECK_THROWS_AS(purity(short_curve, dt, period), std::invalid_argument);
  // vanishing side peak means there is no pulse train to normalize against
  CHECK_THROWS_AS(purity(two_window_curve(1.0, 0.0, dt, period), dt, period),
                  std::domain_error);
}

TEST_CASE("brightness matches the exponential decay integral") {
  const double gamma = 1e-3, dt = 0.5, t0 = 25.0, period = 100.0;
  std::vector<double> occ(301);
  for (size_t i = 0; i < occ.size(); ++i)
    occ[i] = std::exp(-gamma * static_cast<double>(i) * dt);
  const double t_star = t0 + period / 2.0;
  CHECK(brightness(occ, dt, t0, period, gamma) ==
        doctest::Approx(1.0 - std::exp(-gamma * t_star)).epsilon(1e-7));
  std::vector<double> too_short(100, 1.0);
  CHECK_THROWS_AS(brightness(too_short, dt, t0, period, gamma), std::invalid_argument);
}

TEST_CASE("relative error is symmetric-free and guards zero references") {
  CHECK(relative_error(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(relative_error(-2.0, -3.0) == doctest::Approx(0.5));
  CHECK(relative_error(1.0, 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(relative_error(0.0, 1.0), std::domain_error);
}

TEST_CASE("a decaying coherence transforms to a symmetric line") {
  const double gamma = 0.2, dt = 0.05;
  const size_t n = 4001;
  std::vector<cplxd> g1(n);
  for (size_t j = 0; j < n; ++j)
    g1[j] = std::exp(-0.5 * gamma * static_cast<double>(j) * dt);
  const Spectrum sp = emission_spectrum(g1, dt, 400, 1.0);
  REQUIRE(sp.omega.size() == 401);  // even bin counts round up to keep a zero bin

  const size_t izero = 200;
  CHECK(sp.omega[izero] == doctest::Approx(0.0));
  const double peak = sp.s[izero];
  CHECK(peak > 0.0);
  for (size_t i = 0; i < sp.omega.size(); ++i) {
    CHECK(sp.s[i] <= peak + 1e-12);
    // real input makes the cosine transform even
    CHECK(sp.s[i] == doctest::Approx(sp.s[sp.s.size() - 1 - i]).epsilon(1e-10));
  }
  // Lorentzian full width at half maximum equals the decay rate
  size_t ihalf = izero;
  while (ihalf < sp.s.size() && sp.s[ihalf] > 0.5 * peak) ++ihalf;
  const double fwhm = 2.0 * sp.omega[ihalf];
  CHECK(std::abs(fwhm - gamma) < 2.0 * (sp.omega[1] - sp.omega[0]));
  CHECK(std::abs(sideband_asymmetry(sp, 3.0 * gamma)) < 1e-10);
}

TEST_CASE("a detuned satellite shifts weight to one sideband") {
  const double gamma = 0.2, dt = 0.05, delta = 0.5;
  const size_t n = 4001;
  std::vector<cplxd> g1(n), g1c(n);
  for (size_t j = 0; j < n; ++j) {
    const double tau = static_cast<double>(j) * dt;
    const cplxd sat = 0.5 * std::exp(cplxd(0.0, delta * tau));
    g1[j] = std::exp(-0.5 * gamma * tau) * (1.0 + sat);
    g1c[j] = std::exp(-0.5 * gamma * tau) * (1.0 + std::conj(sat));
  }
  const Spectrum sp = emission_spectrum(g1, dt, 400, 1.0);
  const Spectrum spc = emission_spectrum(g1c, dt, 400, 1.0);
  const double a = sideband_asymmetry(sp, 3.0 * gamma);
  const double ac = sideband_asymmetry(spc, 3.0 * gamma);
  CHECK(a != doctest::Approx(0.0));
  // conjugating the satellite mirrors the spectrum, flipping the asymmetry
  CHECK(ac == doctest::Approx(-a).epsilon(1e-9));
  CHECK(a * ac < 0.0);
}

TEST_CASE("spectrum arguments are validated") {
  std::vector<cplxd> g1(10, cplxd(1.0));
  CHECK_THROWS_AS(emission_spectrum({cplxd(1.0)}, 0.1, 11, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(emission_spectrum(g1, -0.1, 11, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(emission_spectrum(g1, 0.1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(emission_spectrum(g1, 0.1, 11, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
