#pragma once

#include <cmath>
#include <complex>

#include "qdemit/config.hpp"
#include "qdemit/liouville.hpp"

namespace qdemit::testing {

// short pulse train for oracle-speed runs, same shape as the default grid
inline RunConfig small_cfg(double lambda, double temperature_K,
                           const std::string& kernel_mode = "continuum") {
  RunConfig c;
  c.bath.lambda = lambda;
  c.bath.temperature_K = temperature_K;
  c.pulses.period_ps = 400.0;
  c.engine.kernel_mode = kernel_mode;
  return c;
}

// reference matrix exponential, scaling and squaring on a plain Taylor sum
inline Mat4 expm_taylor(const Mat4& m) {
  int s = 0;
  double nrm = m.cwiseAbs().maxCoeff();
  while (nrm > 0.25) {
    nrm /= 2.0;
    ++s;
  }
  const Mat4 a = m / std::pow(2.0, s);
  Mat4 out = Mat4::Identity();
  Mat4 term = Mat4::Identity();
  for (int k = 1; k <= 24; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    out += term;
  }
  for (int k = 0; k < s; ++k) out = (out * out).eval();
  return out;
}

inline double max_abs_diff(const Vec4& a, const Vec4& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qdemit::testing
