#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdemit {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using Mat2 = Eigen::Matrix2cd;

// Density matrices are vectorized as v[2*ket + bra], basis order
// [GG, GX, XG, XX] with |G> ground and |X> exciton.

// generator of the driven decaying two-level system,
//   H = (omega/2) sigma_x + eps |X><X|,  collapse sqrt(gamma) |G><X|
Mat4 liouvillian(double omega, double eps, double gamma);

// exp(dt L) at the cell-midpoint Rabi frequency
Mat4 step_propagator(double omega_mid, double eps, double gamma, double dt);

// left application of sigma^- = |G><X|: rho -> sigma^- rho
Vec4 apply_lower_left(const Vec4& v);
// sandwich rho -> sigma^- rho sigma^+
Vec4 apply_lower_sandwich(const Vec4& v);

double trace_real(const Vec4& v);

// trace preservation of a propagator: [1,0,0,1] M = [1,0,0,1]
bool is_trace_preserving(const Mat4& m, double tol = 1e-12);

struct StateChecks {
  double trace_dev = 0.0;   // |tr rho - 1|
  double herm_dev = 0.0;    // max |rho - rho^dagger| element
  double min_eig = 0.0;     // smallest eigenvalue of the hermitized state
};
StateChecks check_state(const Vec4& v);

Mat2 to_matrix(const Vec4& v);
Vec4 to_vector(const Mat2& m);

}  // namespace qdemit
