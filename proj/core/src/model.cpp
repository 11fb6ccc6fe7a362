#include "qdemit/model.hpp"

#include <cmath>
#include <stdexcept>

#include "qdemit/units.hpp"

namespace qdemit {

namespace {

// series form keeps coth(x) finite as x -> 0 where coth cos terms stay integrable
double coth_safe(double x) {
  if (x > 1e-8) return 1.0 / std::tanh(x);
  return 1.0 / x + x / 3.0;
}

}  // namespace

double spectral_density(double omega, const BathParams& bath) {
  if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
  const double wsq = bath.wsq_ps2();
  return bath.lambda * bath.prefactor_ps2() * omega * omega * omega *
         std::exp(-omega * omega / wsq);
}

double pulse_envelope(double t_ps, const PulseParams& pulses) {
  const double sig = pulses.sigma_ps();
  const double peak = pulses.area_rad / (std::sqrt(2.0 * M_PI) * sig);
  double om = 0.0;
  for (int k = 0; k < pulses.count; ++k) {
    const double x = t_ps - (pulses.t0_ps + k * pulses.period_ps);
    if (std::abs(x) <= pulses.truncation_sigmas * sig) {
      om += peak * std::exp(-0.5 * x * x / (sig * sig));
    }
  }
  return om;
}

bool pulse_is_on(double t_ps, const PulseParams& pulses) {
  const double sig = pulses.sigma_ps();
  for (int k = 0; k < pulses.count; ++k) {
    const double x = t_ps - (pulses.t0_ps + k * pulses.period_ps);
    if (std::abs(x) <= pulses.truncation_sigmas * sig) return true;
  }
  return false;
}

std::vector<double> pulse_centers(const PulseParams& pulses) {
  std::vector<double> c(static_cast<std::size_t>(pulses.count));
  for (int k = 0; k < pulses.count; ++k) c[static_cast<std::size_t>(k)] = pulses.t0_ps + k * pulses.period_ps;
  return c;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: need b > a");
  QuadratureRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev estimate of the i-th root
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    r.nodes[static_cast<std::size_t>(i)] = mid - hw * x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + hw * x;
    r.weights[static_cast<std::size_t>(i)] = hw * w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = hw * w;
  }
  return r;
}

BathTables::BathTables(const BathParams& bath, int quad_nodes) : bath_(bath) {
  if (quad_nodes < 16) throw std::invalid_argument("BathTables: quad_nodes must be >= 16");
  const double wc = bath.omega_c_ps();
  omega_cut_ = 8.0 * wc;
  // cutoff sits where the spectral density is negligible relative to its peak
  if (bath.lambda > 0.0) {
    const double jmax = spectral_density(std::sqrt(1.5) * wc, bath);
    if (spectral_density(omega_cut_, bath) >= 1e-12 * jmax) {
      throw std::logic_error("BathTables: frequency cutoff too low for this material");
    }
  }
  QuadratureRule q = gauss_legendre(quad_nodes, 0.0, omega_cut_);
  const std::size_t n = q.nodes.size();
  om_ = q.nodes;
  jw_.resize(n);
  coth_.resize(n);
  const double th = thermal_frequency(bath.temperature_K);
  double shift = 0.0, p0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = om_[i];
    jw_[i] = spectral_density(w, bath) * q.weights[i];
    coth_[i] = coth_safe(w / (2.0 * th));
    shift += jw_[i] / w;
    p0 += jw_[i] / (w * w) * coth_[i];
  }
  polaron_shift_ = shift;
  phi0_ = p0;
  bbar_ = std::exp(-0.5 * p0);
}

std::complex<double> BathTables::corr(double t_ps) const {
  const double t = std::abs(t_ps);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < om_.size(); ++i) {
    const double wt = om_[i] * t;
    re += jw_[i] * coth_[i] * std::cos(wt);
    im -= jw_[i] * std::sin(wt);
  }
  // C(-t) = conj C(t)
  if (t_ps < 0.0) im = -im;
  return {re, im};
}

std::complex<double> BathTables::phi(double t_ps) const {
  const double t = std::abs(t_ps);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < om_.size(); ++i) {
    const double w = om_[i];
    const double f = jw_[i] / (w * w);
    re += f * coth_[i] * std::cos(w * t);
    im -= f * std::sin(w * t);
  }
  if (t_ps < 0.0) im = -im;
  return {re, im};
}

void BathTables::phi_samples(const double* ts, std::size_t n, std::complex<double>* out) const {
  for (std::size_t j = 0; j < n; ++j) out[j] = phi(ts[j]);
}

double BathTables::memory_time_ps() const {
  const double thresh = 1e-3 * std::abs(corr(0.0));
  double tm = 0.0;
  for (double t = 0.0; t <= 60.0; t += 0.05) {
    if (std::abs(corr(t)) >= thresh) tm = t;
  }
  return tm;
}

}  // namespace qdemit
