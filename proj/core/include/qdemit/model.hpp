#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qdemit/config.hpp"

namespace qdemit {

// J(omega) in 1/ps^2 at omega in 1/ps; omega < 0 is a domain error,
// linear in bath.lambda by construction.
double spectral_density(double omega, const BathParams& bath);

// instantaneous Rabi frequency of the truncated Gaussian train, 1/ps
double pulse_envelope(double t_ps, const PulseParams& pulses);
// true inside the truncation support of any pulse
bool pulse_is_on(double t_ps, const PulseParams& pulses);
std::vector<double> pulse_centers(const PulseParams& pulses);

// Gauss-Legendre rule on [a, b]
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n, double a, double b);

// Frequency-grid bath integrals shared by the influence functional and the
// polaron transformation. The grid spans [0, omega_cut] with omega_cut fixed
// such that J(omega_cut) < 1e-12 * max J.
class BathTables {
 public:
  BathTables(const BathParams& bath, int quad_nodes = 6000);

  const BathParams& bath() const { return bath_; }

  // polaron shift Omega_p = integral J / omega, 1/ps
  double polaron_shift() const { return polaron_shift_; }
  // phi(0) = integral J / omega^2 coth(omega / 2 theta)
  double phi0() const { return phi0_; }
  // thermal-average coupling factor B = exp(-phi(0)/2)
  double bbar() const { return bbar_; }

  // bath autocorrelation C(t) = integral J [coth cos - i sin]
  std::complex<double> corr(double t_ps) const;
  // phonon propagator phase phi(t) = integral J/omega^2 [coth cos - i sin]
  std::complex<double> phi(double t_ps) const;
  // vectorized phi over a time array
  void phi_samples(const double* ts, std::size_t n, std::complex<double>* out) const;

  // time at which |C(t)| first stays below 1e-3 |C(0)|
  double memory_time_ps() const;

  double omega_cut() const { return omega_cut_; }

 private:
  BathParams bath_;
  double omega_cut_ = 0.0;
  std::vector<double> om_;      // quadrature nodes
  std::vector<double> jw_;      // J(om) * quadrature weight
  std::vector<double> coth_;    // coth(om / 2 theta)
  double polaron_shift_ = 0.0;
  double phi0_ = 0.0;
  double bbar_ = 1.0;
};

}  // namespace qdemit
