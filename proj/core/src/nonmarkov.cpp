#include "qdemit/nonmarkov.hpp"

#include <cmath>
#include <stdexcept>

namespace qdemit {

double trace_distance(const Mat2& a, const Mat2& b) {
  // the distance formula below is only valid for Hermitian operators
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-9 ||
      (b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::domain_error("trace distance needs Hermitian inputs");
  }
  Mat2 d = a - b;
  d = ((d + d.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Mat2> es(d);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<Eigen::Vector3d> fibonacci_hemisphere(int npts) {
  if (npts < 1) throw std::invalid_argument("need at least one direction");
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    const double z = static_cast<double>(i) / npts;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(r * std::cos(ga * i), r * std::sin(ga * i), z);
  }
  return out;
}

std::vector<Eigen::Matrix3d> bloch_response(PathEngine& eng) {
  const int ntau = eng.nsteps() + 1;
  const std::vector<cplx> kern = eng.kernel("fresh", ntau);
  // Hermitian seeds along the three Bloch axes; antipodal difference halves
  // drop the trace part so only the traceless seed response matters
  const Rep seed_x(cplx(0.0), cplx(0.0), cplx(1.0), cplx(1.0));
  const Rep seed_y(cplx(0.0), cplx(0.0), cplx(0.0, -1.0), cplx(0.0, 1.0));
  const Rep seed_z(cplx(1.0), cplx(-1.0), cplx(0.0), cplx(0.0));

  std::vector<Eigen::Matrix3d> v(static_cast<size_t>(ntau));
  const Rep seeds[3] = {seed_x, seed_y, seed_z};
  std::vector<TauRow> rows(3);
  for (int s = 0; s < 3; ++s) {
    TauRow& row = rows[static_cast<size_t>(s)];
    eng.synth_row(0, ntau, seeds[s], &kern, 0, row, true);
    // the synthesized row starts after the seed step, the seed reads out as is
    row.c[0] = seeds[s](2);
    row.o[0] = seeds[s](1);
  }
  for (int k = 0; k < ntau; ++k) {
    Eigen::Matrix3d m;
    for (int s = 0; s < 3; ++s) {
      const cplx c = rows[static_cast<size_t>(s)].c[static_cast<size_t>(k)];
      const cplx o = rows[static_cast<size_t>(s)].o[static_cast<size_t>(k)];
      // Bloch components of the evolved difference: x = 2 Re rho_GX,
      // y = -2 Im rho_GX, z = rho_GG - rho_XX = -2 rho_XX for traceless seeds
      m(0, s) = 2.0 * c.real();
      m(1, s) = -2.0 * c.imag();
      m(2, s) = -2.0 * o.real();
    }
    v[static_cast<size_t>(k)] = m;
  }
  return v;
}

BlpResult blp_from_response(const std::vector<Eigen::Matrix3d>& v, int pairs) {
  const std::vector<Eigen::Vector3d> dirs = fibonacci_hemisphere(pairs);
  BlpResult res;
  res.per_pair.reserve(dirs.size());
  for (const Eigen::Vector3d& n : dirs) {
    double acc = 0.0;
    double prev = 0.5 * (v.front() * n).norm();
    for (size_t k = 1; k < v.size(); ++k) {
      const double cur = 0.5 * (v[k] * n).norm();
      if (cur > prev) acc += cur - prev;
      prev = cur;
    }
    res.per_pair.push_back(acc);
    if (acc > res.n) {
      res.n = acc;
      res.best = n;
    }
  }
  return res;
}

BlpResult non_markovianity(const RunConfig& cfg) {
  PathEngine eng(cfg);
  if (!cfg.blp.include_drive) eng.disable_drive();
  const std::vector<Eigen::Matrix3d> v = bloch_response(eng);
  return blp_from_response(v, cfg.blp.pairs);
}

}  // namespace qdemit
