#pragma once

#include <cstddef>
#include <vector>

#include "qdemit/influence.hpp"
#include "qdemit/liouville.hpp"

namespace qdemit {

// Flat augmented tensor over Liouville-path histories. Digit 0 (most
// significant) is the newest time slice; rank grows from 1 up to the memory
// depth, after which the oldest slice is summed out on every step.
class AdmTensor {
 public:
  AdmTensor() = default;
  explicit AdmTensor(int rank);
  static AdmTensor from_state(const Vec4& v);

  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

 private:
  int rank_ = 0;
  std::vector<cplx> data_;
};

// One-step propagation of the augmented tensor under a system map M and the
// influence weights. Weight products over the retained history digits are
// precomputed once for the saturated rank.
class AdmPropagator {
 public:
  // throws std::runtime_error naming the required bytes if the tensors for
  // this memory depth would exceed the cap
  AdmPropagator(const InfluenceWeights& w, int n_c, double memory_cap_bytes);

  int n_c() const { return n_c_; }
  const InfluenceWeights& weights() const { return w_; }

  void step(AdmTensor& a, const Mat4& m) const;

  // sum over all history digits, leaving the newest Liouville index
  static Vec4 reduce(const AdmTensor& a);

  // newest-slice self weight w0, the bookkeeping a restarted history carries
  // on its seed slice (memory-discard correlator branch)
  void apply_seed_weights(AdmTensor& a) const;

  // newest-slice insertions, rho -> s^- rho and rho -> s^- rho s^+
  static void insert_lower_left(AdmTensor& a);
  static void insert_lower_sandwich(AdmTensor& a);

  // working-set estimate for the saturated tensors at depth n_c
  static std::size_t bytes_required(int n_c);

 private:
  InfluenceWeights w_;
  int n_c_;
  // wprod_[l] over the 4^(n_c-1) retained-history digit strings
  std::vector<std::vector<cplx>> wprod_;
  mutable std::vector<cplx> contracted_;
  mutable std::vector<cplx> out_;
};

}  // namespace qdemit
