#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdemit/engine.hpp"

namespace qdemit {

// trace distance of two density matrices; inputs must be Hermitian
double trace_distance(const Mat2& a, const Mat2& b);

// evenly spread directions on the upper Bloch hemisphere; each direction
// stands for the antipodal pure-state pair along it
std::vector<Eigen::Vector3d> fibonacci_hemisphere(int npts);

// Bloch response matrix of the reduced evolution at every time step, built
// from three Hermitian seed objects carried through the same propagator as
// the correlation rows
std::vector<Eigen::Matrix3d> bloch_response(PathEngine& eng);

struct BlpResult {
  double n = 0.0;                       // summed trace-distance revivals
  Eigen::Vector3d best{0.0, 0.0, 1.0};  // direction attaining the maximum
  std::vector<double> per_pair;
};

// divisibility-violation measure maximized over sampled antipodal pairs;
// the map is undriven unless cfg.blp.include_drive is set
BlpResult non_markovianity(const RunConfig& cfg);

// same measure evaluated on an existing response matrix
BlpResult blp_from_response(const std::vector<Eigen::Matrix3d>& v, int pairs);

}  // namespace qdemit
