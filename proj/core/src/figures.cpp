#include "qdemit/figures.hpp"

#include <cmath>
#include <stdexcept>

namespace qdemit {

double trapezoid(const std::vector<double>& y, double dt, std::size_t i0, std::size_t i1) {
  if (i1 >= y.size() || i0 > i1) throw std::invalid_argument("trapezoid: bad index range");
  if (i0 == i1) return 0.0;
  double acc = 0.5 * (y[i0] + y[i1]);
  for (std::size_t i = i0 + 1; i < i1; ++i) acc += y[i];
  return acc * dt;
}

namespace {

// central area counts both tau signs of the symmetric coincidence curve
double window_ratio(const std::vector<double>& curve, double dt, double period,
                    const char* what) {
  const auto ic = static_cast<std::size_t>(std::llround(0.5 * period / dt));
  const auto iside = static_cast<std::size_t>(std::llround(1.5 * period / dt));
  if (iside >= curve.size()) {
    throw std::invalid_argument(std::string(what) +
                                ": tau grid must reach 1.5 pulse periods; run with at "
                                "least two pulse periods of trailing coverage");
  }
  const double central = 2.0 * trapezoid(curve, dt, 0, ic);
  const double side = trapezoid(curve, dt, ic, iside);
  if (side <= 0.0) {
    throw std::domain_error(std::string(what) +
                            ": side peak area vanishes; the pulse train needs at least "
                            "two pulses to form a side peak");
  }
  return central / side;
}

}  // namespace

double purity(const std::vector<double>& g2_tau, double dt_ps, double period_ps) {
  return 1.0 - window_ratio(g2_tau, dt_ps, period_ps, "purity");
}

double indistinguishability(const std::vector<double>& hom_tau, double dt_ps,
                            double period_ps) {
  return 1.0 - window_ratio(hom_tau, dt_ps, period_ps, "indistinguishability");
}

double brightness(const std::vector<double>& occ_line, double dt_ps, double t0_ps,
                  double period_ps, double gamma_ps) {
  const auto ib = static_cast<std::size_t>(std::llround((t0_ps + 0.5 * period_ps) / dt_ps));
  if (ib >= occ_line.size()) {
    throw std::invalid_argument("brightness: trajectory must cover t0 + period/2");
  }
  return gamma_ps * trapezoid(occ_line, dt_ps, 0, ib);
}

double relative_error(double m_ref, double m_approx) {
  if (m_ref == 0.0) throw std::domain_error("relative_error: reference value is zero");
  return std::abs((m_ref - m_approx) / m_ref);
}

Spectrum emission_spectrum(const std::vector<std::complex<double>>& g1_tau, double dt_ps,
                           int nbins, double omega_max_ps) {
  if (g1_tau.size() < 2) throw std::invalid_argument("emission_spectrum: curve too short");
  if (dt_ps <= 0.0) throw std::invalid_argument("emission_spectrum: dt must be > 0");
  if (nbins < 3) throw std::invalid_argument("emission_spectrum: need at least 3 bins");
  if (omega_max_ps <= 0.0) throw std::invalid_argument("emission_spectrum: omega_max must be > 0");
  const std::size_t n = g1_tau.size();
  const double tw = static_cast<double>(n - 1) * dt_ps;
  // odd bin count keeps the grid symmetric with a bin centered at zero
  const int nb = (nbins % 2 == 0) ? nbins + 1 : nbins;
  Spectrum sp;
  sp.omega.resize(static_cast<std::size_t>(nb));
  sp.s.resize(static_cast<std::size_t>(nb));
  const double dw = 2.0 * omega_max_ps / (nb - 1);
  for (int b = 0; b < nb; ++b) {
    const double w = -omega_max_ps + b * dw;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double tau = static_cast<double>(j) * dt_ps;
      const double hann = std::cos(0.5 * M_PI * tau / tw);
      const double win = hann * hann;
      const std::complex<double> ph(std::cos(w * tau), std::sin(w * tau));
      // G1(-tau) = conj G1(tau) symmetrization keeps the transform real
      const double term = (g1_tau[j] * ph).real() * win;
      acc += (j == 0) ? 0.5 * term : term;
    }
    sp.omega[static_cast<std::size_t>(b)] = w;
    sp.s[static_cast<std::size_t>(b)] = 2.0 * acc * dt_ps;
  }
  return sp;
}

double sideband_asymmetry(const Spectrum& sp, double zpl_halfwidth) {
  double blue = 0.0, red = 0.0;
  for (std::size_t i = 0; i < sp.omega.size(); ++i) {
    if (sp.omega[i] > zpl_halfwidth) blue += sp.s[i];
    if (sp.omega[i] < -zpl_halfwidth) red += sp.s[i];
  }
  return blue - red;
}

}  // namespace qdemit
