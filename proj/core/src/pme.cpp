#include "qdemit/pme.hpp"

#include <cmath>
#include <stdexcept>

namespace qdemit {

namespace {

// phase integrals vanish beyond the bath correlation support
constexpr double kPhiSupportPs = 300.0;
// rate-integral grid over the bath correlation support
constexpr double kRateSpanPs = 60.0;
constexpr double kRateStepPs = 0.05;

Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

// rho -> A rho on the row-major vectorization v[2 ket + bra]
Mat4 lmul(const Mat2& a) { return kron2(a, Mat2::Identity()); }
// rho -> rho A
Mat4 rmul(const Mat2& a) { return kron2(Mat2::Identity(), a.transpose()); }

Mat4 mat_pow(Mat4 base, int n) {
  Mat4 out = Mat4::Identity();
  while (n > 0) {
    if (n & 1) out = base * out;
    base = (base * base).eval();
    n >>= 1;
  }
  return out;
}

}  // namespace

PmeEngine::PmeEngine(const RunConfig& cfg)
    : cfg_(cfg), tables_(cfg.bath, cfg.engine.quad_nodes) {
  cfg_.validate();
  build();
}

void PmeEngine::build() {
  const double dt = cfg_.grid.dt_ps;
  const double gamma = cfg_.system.gamma_ps;
  nsteps_ = static_cast<int>(std::lround(cfg_.horizon_ps() / dt));
  d_ = std::exp(-gamma * dt);
  h_step_ = std::exp(cplx(-0.5 * gamma * dt, -cfg_.system.detuning_ps * dt));

  const int nf = static_cast<int>(std::lround(kRateSpanPs / kRateStepPs));
  tf_.resize(static_cast<size_t>(nf) + 1);
  tfw_.assign(tf_.size(), kRateStepPs);
  tfw_.front() = tfw_.back() = kRateStepPs / 2.0;
  for (size_t i = 0; i < tf_.size(); ++i) tf_[i] = static_cast<double>(i) * kRateStepPs;
  std::vector<cplx> phif(tf_.size());
  tables_.phi_samples(tf_.data(), tf_.size(), phif.data());
  const double b2 = tables_.bbar() * tables_.bbar();
  lam_x_.resize(tf_.size());
  lam_y_.resize(tf_.size());
  for (size_t i = 0; i < tf_.size(); ++i) {
    lam_x_[i] = b2 * (std::cosh(phif[i]) - 1.0);
    lam_y_[i] = b2 * std::sinh(phif[i]);
  }

  const int ntau = tau_points(cfg_);
  dress_.assign(static_cast<size_t>(ntau), cplx(b2, 0.0));
  int nsup = std::min(ntau, static_cast<int>(std::lround(kPhiSupportPs / dt)) + 1);
  std::vector<double> taus(static_cast<size_t>(nsup));
  for (int j = 0; j < nsup; ++j) taus[static_cast<size_t>(j)] = j * dt;
  std::vector<cplx> phit(taus.size());
  tables_.phi_samples(taus.data(), taus.size(), phit.data());
  for (int j = 0; j < nsup; ++j) dress_[static_cast<size_t>(j)] = b2 * std::exp(phit[static_cast<size_t>(j)]);

  windows_.clear();
  int a = -1, prev = -2;
  for (int k = 0; k < nsteps_; ++k) {
    if (!pulse_is_on((k + 0.5) * dt, cfg_.pulses)) continue;
    if (k > prev + 1) {
      if (a >= 0) windows_.emplace_back(a, prev);
      a = k;
    }
    prev = k;
  }
  if (a >= 0) windows_.emplace_back(a, prev);

  wmaps_.clear();
  wmaps_.reserve(windows_.size());
  for (const auto& [wa, wb] : windows_) {
    std::vector<Mat4> maps;
    maps.reserve(static_cast<size_t>(wb - wa + 1));
    for (int k = wa; k <= wb; ++k) maps.push_back(step_map(k));
    wmaps_.push_back(std::move(maps));
  }
}

Mat4 PmeEngine::generator(double t_ps) const {
  const double om = pulse_envelope(t_ps, cfg_.pulses);
  const double omr = tables_.bbar() * om;
  const double gamma = cfg_.system.gamma_ps;
  Mat4 l = liouvillian(omr, -cfg_.system.detuning_ps, gamma);
  if (om == 0.0 || cfg_.bath.lambda <= 0.0) return l;

  cplx ltx = 0.0, lyc = 0.0, lys = 0.0;
  for (size_t i = 0; i < tf_.size(); ++i) {
    const double c = std::cos(omr * tf_[i]);
    const double s = std::sin(omr * tf_[i]);
    ltx += tfw_[i] * lam_x_[i];
    lyc += tfw_[i] * lam_y_[i] * c;
    lys += tfw_[i] * lam_y_[i] * s;
  }

  Mat2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  const double pref = 0.25 * om * om;
  const Mat2 bop_x = ltx * sx;
  const Mat2 bop_y = lyc * sy - lys * sz;
  l -= pref * (lmul(sx) - rmul(sx)) * (lmul(bop_x) - rmul(bop_x.adjoint()));
  l -= pref * (lmul(sy) - rmul(sy)) * (lmul(bop_y) - rmul(bop_y.adjoint()));
  return l;
}

Mat4 PmeEngine::step_map(int k) const {
  const double dt = cfg_.grid.dt_ps;
  // generator held at the cell midpoint, matching the path-sum drive model;
  // substepped fourth-order map approximates its exponential
  const Mat4 l = generator((k + 0.5) * dt);
  const int n = std::max(1, cfg_.engine.pme_substeps);
  const double h = dt / n;
  const Mat4 id = Mat4::Identity();
  const Mat4 k1 = l;
  const Mat4 k2 = l * (id + (h / 2.0) * k1);
  const Mat4 k3 = l * (id + (h / 2.0) * k2);
  const Mat4 k4 = l * (id + h * k3);
  const Mat4 one = id + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return mat_pow(one, n);
}

Vec4 PmeEngine::stretch(const Vec4& v, int steps) const {
  const double dt = cfg_.grid.dt_ps;
  const double gamma = cfg_.system.gamma_ps;
  const double d = std::exp(-gamma * dt * steps);
  const cplx h = std::exp(cplx(-0.5 * gamma * dt * steps, -cfg_.system.detuning_ps * dt * steps));
  return Vec4(v(0) + v(3) * (1.0 - d), v(1) * h, v(2) * std::conj(h), v(3) * d);
}

TimeLine PmeEngine::t_line() {
  if (line_done_) return line_;
  line_.red.assign(static_cast<size_t>(nsteps_) + 1, Vec4::Zero());
  line_.occ.assign(static_cast<size_t>(nsteps_) + 1, 0.0);
  line_.stats = InvariantStats{};
  Vec4 v(cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0));
  line_.red[0] = v;

  int k = 0;
  size_t w = 0;
  while (k < nsteps_) {
    while (w < windows_.size() && windows_[w].second < k) ++w;
    if (w < windows_.size() && windows_[w].first <= k) {
      const int wa = windows_[w].first;
      const int kn = std::min(windows_[w].second + 1, nsteps_);
      for (; k < kn; ++k) {
        v = (wmaps_[w][static_cast<size_t>(k - wa)] * v).eval();
        line_.red[static_cast<size_t>(k) + 1] = v;
      }
    } else {
      const int kn = (w < windows_.size()) ? std::min(windows_[w].first, nsteps_) : nsteps_;
      for (int m = 1; m <= kn - k; ++m)
        line_.red[static_cast<size_t>(k + m)] = stretch(v, m);
      v = line_.red[static_cast<size_t>(kn)];
      k = kn;
    }
  }
  for (size_t i = 0; i < line_.red.size(); ++i) {
    line_.occ[i] = line_.red[i](3).real();
    if (cfg_.engine.validate_invariants) line_.stats.absorb(check_state(line_.red[i]));
  }
  line_done_ = true;
  return line_;
}

void PmeEngine::evolve_row(const Vec4& seed, int i_t, int ntau, std::vector<cplx>& gx,
                           std::vector<cplx>& occ) const {
  gx.assign(static_cast<size_t>(ntau), cplx(0.0));
  occ.assign(static_cast<size_t>(ntau), cplx(0.0));
  Vec4 v = seed;
  gx[0] = v(1);
  occ[0] = v(3);
  // rows past the last propagated step stay zero
  const int k_end = std::min(i_t + ntau - 1, nsteps_);
  int k = i_t;
  size_t w = 0;
  while (k < k_end) {
    while (w < windows_.size() && windows_[w].second < k) ++w;
    if (w < windows_.size() && windows_[w].first <= k) {
      const int wa = windows_[w].first;
      const int kn = std::min(windows_[w].second + 1, k_end);
      for (; k < kn; ++k) {
        v = (wmaps_[w][static_cast<size_t>(k - wa)] * v).eval();
        gx[static_cast<size_t>(k + 1 - i_t)] = v(1);
        occ[static_cast<size_t>(k + 1 - i_t)] = v(3);
      }
    } else {
      const int kn = (w < windows_.size()) ? std::min(windows_[w].first, k_end) : k_end;
      const double dt = cfg_.grid.dt_ps;
      const double gamma = cfg_.system.gamma_ps;
      cplx h(1.0);
      double d = 1.0;
      const cplx h1 = std::exp(cplx(-0.5 * gamma * dt, -cfg_.system.detuning_ps * dt));
      const double d1 = std::exp(-gamma * dt);
      for (int m = 1; m <= kn - k; ++m) {
        h *= h1;
        d *= d1;
        gx[static_cast<size_t>(k + m - i_t)] = v(1) * h;
        occ[static_cast<size_t>(k + m - i_t)] = v(3) * d;
      }
      v = stretch(v, kn - k);
      k = kn;
    }
  }
}

PointCurves PmeEngine::point_curves(std::vector<GridDumpRow>* dump) {
  t_line();
  const int ntau = tau_points(cfg_);
  auto fill = [&](int i_t, std::vector<cplx>& g1, std::vector<cplx>& g2) {
    const Vec4& r = line_.red[static_cast<size_t>(i_t)];
    const Vec4 s1 = apply_lower_left(r);
    const Vec4 s2 = apply_lower_sandwich(r);
    std::vector<cplx> occ1, gx2;
    evolve_row(s1, i_t, ntau, g1, occ1);
    evolve_row(s2, i_t, ntau, gx2, g2);
    for (int j = 0; j < ntau; ++j) g1[static_cast<size_t>(j)] *= dress_[static_cast<size_t>(j)];
  };
  PointCurves pc = assemble_curves(cfg_, line_.occ, fill, dump);
  pc.stats = line_.stats;
  return pc;
}

}  // namespace qdemit
