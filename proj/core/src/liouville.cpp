#include "qdemit/liouville.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qdemit {

Mat4 liouvillian(double omega, double eps, double gamma) {
  const cplx I(0.0, 1.0);
  Mat2 h;
  h << 0.0, omega / 2.0, omega / 2.0, eps;
  Mat2 id = Mat2::Identity();
  Mat2 c;
  c << 0.0, 1.0, 0.0, 0.0;  // |G><X|
  Mat2 cdc = c.adjoint() * c;

  auto kron = [](const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };

  Mat4 lh = -I * (kron(h, id) - kron(id, h.transpose()));
  Mat4 ld = gamma * (kron(c, c.conjugate()) -
                     0.5 * (kron(cdc, id) + kron(id, cdc.transpose())));
  return lh + ld;
}

Mat4 step_propagator(double omega_mid, double eps, double gamma, double dt) {
  Mat4 l = liouvillian(omega_mid, eps, gamma) * dt;
  return l.exp();
}

Vec4 apply_lower_left(const Vec4& v) {
  Vec4 out = Vec4::Zero();
  out(0) = v(2);  // (s- rho)_GG = rho_XG
  out(1) = v(3);  // (s- rho)_GX = rho_XX
  return out;
}

Vec4 apply_lower_sandwich(const Vec4& v) {
  Vec4 out = Vec4::Zero();
  out(0) = v(3);  // (s- rho s+)_GG = rho_XX
  return out;
}

double trace_real(const Vec4& v) { return (v(0) + v(3)).real(); }

bool is_trace_preserving(const Mat4& m, double tol) {
  Eigen::RowVector4cd tr;
  tr << 1.0, 0.0, 0.0, 1.0;
  Eigen::RowVector4cd res = tr * m;
  return (res - tr).cwiseAbs().maxCoeff() < tol;
}

StateChecks check_state(const Vec4& v) {
  StateChecks c;
  c.trace_dev = std::abs(v(0) + v(3) - 1.0);
  Mat2 rho = to_matrix(v);
  Mat2 dev = rho - rho.adjoint();
  c.herm_dev = dev.cwiseAbs().maxCoeff();
  Mat2 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat2> es(herm);
  c.min_eig = es.eigenvalues().minCoeff();
  return c;
}

Mat2 to_matrix(const Vec4& v) {
  Mat2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

Vec4 to_vector(const Mat2& m) {
  Vec4 v;
  v << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return v;
}

}  // namespace qdemit
