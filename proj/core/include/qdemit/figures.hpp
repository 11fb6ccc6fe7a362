#pragma once

#include <complex>
#include <vector>

namespace qdemit {

// Figures of merit from pulse-train-averaged correlation curves. All curves
// live on a uniform tau grid of spacing dt_ps covering [0, tau_max_factor *
// period]; the central window is [-period/2, period/2] folded onto tau >= 0
// and the side window is [period/2, 3 period/2].

// single-photon purity 1 - (central coincidence area) / (side peak area)
double purity(const std::vector<double>& g2_tau, double dt_ps, double period_ps);

// two-photon interference visibility, same window ratio on the
// Hong-Ou-Mandel coincidence curve
double indistinguishability(const std::vector<double>& hom_tau, double dt_ps,
                            double period_ps);

// collected emission probability per pulse: gamma times the occupation
// integral up to t0 + period/2. The ideal reference is a delta-excited
// emitter over one full period, 1 - exp(-gamma*period), within 3e-6 of
// unity for the default train, absorbed as exactly one.
double brightness(const std::vector<double>& occ_line, double dt_ps, double t0_ps,
                  double period_ps, double gamma_ps);

// relative deviation |(m_ref - m_approx) / m_ref|
double relative_error(double m_ref, double m_approx);

// trapezoid integral on a uniform grid
double trapezoid(const std::vector<double>& y, double dt, std::size_t i0, std::size_t i1);

// time-averaged emission spectrum of a tau correlation curve: half-Hann
// windowed cosine transform, symmetrized so the output is real. Frequencies
// are relative to the driven line; bins are symmetric around zero.
struct Spectrum {
  std::vector<double> omega;  // 1/ps
  std::vector<double> s;
};
Spectrum emission_spectrum(const std::vector<std::complex<double>>& g1_tau, double dt_ps,
                           int nbins, double omega_max_ps);

// weight difference between the blue and red sideband, zero-phonon line
// excluded by |omega| <= zpl_halfwidth
double sideband_asymmetry(const Spectrum& sp, double zpl_halfwidth);

}  // namespace qdemit
