#include "qdemit/adm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdemit {

namespace {

std::size_t pow4(int r) { return std::size_t{1} << (2 * r); }

}  // namespace

AdmTensor::AdmTensor(int rank) : rank_(rank), data_(pow4(rank), cplx(0.0, 0.0)) {}

AdmTensor AdmTensor::from_state(const Vec4& v) {
  AdmTensor a(1);
  for (int l = 0; l < 4; ++l) a[static_cast<std::size_t>(l)] = v(l);
  return a;
}

std::size_t AdmPropagator::bytes_required(int n_c) {
  // tensor + output + contraction scratch + precomputed weight products
  const std::size_t n = pow4(n_c);
  return (n + n + n / 4 + n) * sizeof(cplx);
}

AdmPropagator::AdmPropagator(const InfluenceWeights& w, int n_c, double memory_cap_bytes)
    : w_(w), n_c_(n_c) {
  if (n_c < 1) throw std::invalid_argument("AdmPropagator: n_c must be >= 1");
  const std::size_t need = bytes_required(n_c);
  if (static_cast<double>(need) > memory_cap_bytes) {
    throw std::runtime_error(
        "augmented tensor at memory depth " + std::to_string(n_c) + " needs " +
        std::to_string(need) + " bytes, cap is " +
        std::to_string(static_cast<std::size_t>(memory_cap_bytes)) +
        " bytes; raise engine.memory_cap_gib to allow this");
  }
  if (static_cast<int>(w.wm.size()) < n_c - 1) {
    throw std::invalid_argument("AdmPropagator: weight table shorter than memory depth");
  }
  // weight product over history digits for the saturated rank; digit p of the
  // retained history sits p+1 steps behind the new slice
  const int hist = n_c - 1;
  const std::size_t nh = pow4(hist);
  wprod_.assign(4, std::vector<cplx>(nh));
  for (int l = 0; l < 4; ++l) {
    auto& dst = wprod_[static_cast<std::size_t>(l)];
    dst.assign(nh, w_.w0[static_cast<std::size_t>(l)]);
    for (int p = 0; p < hist; ++p) {
      const int shift = 2 * (hist - 1 - p);
      const auto& tbl = w_.wm[static_cast<std::size_t>(p)];
      for (std::size_t c = 0; c < nh; ++c) {
        const int digit = static_cast<int>((c >> shift) & 3u);
        dst[c] *= tbl[static_cast<std::size_t>(4 * l + digit)];
      }
    }
  }
  contracted_.resize(nh);
  out_.resize(pow4(n_c));
}

void AdmPropagator::step(AdmTensor& a, const Mat4& m) const {
  const int r = a.rank();
  if (r < 1 || r > n_c_) throw std::logic_error("AdmPropagator::step: bad tensor rank");

  if (n_c_ == 1) {
    // memoryless window: the single slice is both propagated and summed out
    Vec4 v;
    for (int l = 0; l < 4; ++l) v(l) = a[static_cast<std::size_t>(l)];
    Vec4 nv = m * v;
    for (int l = 0; l < 4; ++l) a[static_cast<std::size_t>(l)] = w_.w0[static_cast<std::size_t>(l)] * nv(l);
    return;
  }

  const bool saturated = (r == n_c_);
  const cplx* src = a.data();
  std::size_t nb = a.size();
  if (saturated) {
    // oldest slice leaves the window, weight 1
    nb = a.size() / 4;
    for (std::size_t c = 0; c < nb; ++c) {
      contracted_[c] = src[4 * c] + src[4 * c + 1] + src[4 * c + 2] + src[4 * c + 3];
    }
    src = contracted_.data();
  }
  const int rb = saturated ? r - 1 : r;  // digits retained under the new slice
  const std::size_t blk = nb / 4;        // entries per leading-digit block

  if (saturated) {
    // hot path: precomputed weight products
    for (int l = 0; l < 4; ++l) {
      const cplx* wl = wprod_[static_cast<std::size_t>(l)].data();
      cplx* dst = out_.data() + static_cast<std::size_t>(l) * nb;
      for (int f = 0; f < 4; ++f) {
        const cplx mf = m(l, f);
        const std::size_t base = static_cast<std::size_t>(f) * blk;
        for (std::size_t q = 0; q < blk; ++q) {
          dst[base + q] = wl[base + q] * mf * src[base + q];
        }
      }
    }
    std::copy(out_.begin(), out_.begin() + static_cast<std::ptrdiff_t>(4 * nb), a.data());
    return;
  }

  // growing phase: weights assembled per entry over the short history
  AdmTensor grown(r + 1);
  for (int l = 0; l < 4; ++l) {
    for (std::size_t c = 0; c < nb; ++c) {
      const int f = static_cast<int>(c / blk);
      cplx wfull = w_.w0[static_cast<std::size_t>(l)];
      for (int p = 0; p < rb; ++p) {
        const int shift = 2 * (rb - 1 - p);
        const int digit = static_cast<int>((c >> shift) & 3u);
        wfull *= w_.wm[static_cast<std::size_t>(p)][static_cast<std::size_t>(4 * l + digit)];
      }
      grown[static_cast<std::size_t>(l) * nb + c] = wfull * m(l, f) * src[c];
    }
  }
  a = std::move(grown);
}

Vec4 AdmPropagator::reduce(const AdmTensor& a) {
  Vec4 red = Vec4::Zero();
  const std::size_t nb = a.size() / 4;
  for (int l = 0; l < 4; ++l) {
    cplx acc = 0.0;
    const cplx* src = a.data() + static_cast<std::size_t>(l) * nb;
    for (std::size_t c = 0; c < nb; ++c) acc += src[c];
    red(l) = acc;
  }
  return red;
}

void AdmPropagator::apply_seed_weights(AdmTensor& a) const {
  const std::size_t nb = a.size() / 4;
  for (int l = 0; l < 4; ++l) {
    const cplx w = w_.w0[static_cast<std::size_t>(l)];
    cplx* dst = a.data() + static_cast<std::size_t>(l) * nb;
    for (std::size_t c = 0; c < nb; ++c) dst[c] *= w;
  }
}

void AdmPropagator::insert_lower_left(AdmTensor& a) {
  const std::size_t nb = a.size() / 4;
  cplx* d = a.data();
  for (std::size_t c = 0; c < nb; ++c) {
    d[0 * nb + c] = d[2 * nb + c];  // GG <- XG
    d[1 * nb + c] = d[3 * nb + c];  // GX <- XX
    d[2 * nb + c] = 0.0;
    d[3 * nb + c] = 0.0;
  }
}

void AdmPropagator::insert_lower_sandwich(AdmTensor& a) {
  const std::size_t nb = a.size() / 4;
  cplx* d = a.data();
  for (std::size_t c = 0; c < nb; ++c) {
    d[0 * nb + c] = d[3 * nb + c];  // GG <- XX
    d[1 * nb + c] = 0.0;
    d[2 * nb + c] = 0.0;
    d[3 * nb + c] = 0.0;
  }
}

}  // namespace qdemit
