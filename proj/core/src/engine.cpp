#include "qdemit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdemit {

namespace {

constexpr double kPhiSupportPs = 300.0;  // bath phase is zero beyond this lag

EtaTable zero_eta(double dt) {
  EtaTable t;
  t.dt = dt;
  t.n_c = 1;
  t.diag = 0.0;
  t.off.assign(1, cplx(0.0, 0.0));
  return t;
}

// swap-conjugate of a gx-basis readout gives the xg-basis readout
Vec4 mirror_read(const Vec4& r) {
  Vec4 out;
  out << std::conj(r(0)), std::conj(r(2)), std::conj(r(1)), std::conj(r(3));
  return out;
}

// same mirror in the collapsed representation (pG, pX, cGX, cXG)
Rep mirror_rep(const Rep& r) {
  Rep out;
  out << std::conj(r(0)), std::conj(r(1)), std::conj(r(3)), std::conj(r(2));
  return out;
}

}  // namespace

void InvariantStats::absorb(const StateChecks& c) {
  max_trace_dev = std::max(max_trace_dev, c.trace_dev);
  max_herm_dev = std::max(max_herm_dev, c.herm_dev);
  min_eig = std::min(min_eig, c.min_eig);
  ++steps;
}

void InvariantStats::absorb(const InvariantStats& o) {
  max_trace_dev = std::max(max_trace_dev, o.max_trace_dev);
  max_herm_dev = std::max(max_herm_dev, o.max_herm_dev);
  min_eig = std::min(min_eig, o.min_eig);
  steps += o.steps;
}

PathEngine::PathEngine(const RunConfig& cfg)
    : cfg_(cfg),
      tables_(cfg.bath, cfg.engine.quad_nodes),
      eta_(cfg.bath.lambda > 0.0 ? compute_eta_table(tables_, cfg.grid.dt_ps, cfg.grid.n_c)
                                 : zero_eta(cfg.grid.dt_ps)) {
  build();
}

PathEngine::PathEngine(const RunConfig& cfg, const EtaTable& eta)
    : cfg_(cfg),
      tables_(cfg.bath, cfg.engine.quad_nodes),
      eta_(cfg.bath.lambda > 0.0 ? eta : zero_eta(cfg.grid.dt_ps)) {
  if (cfg.bath.lambda > 0.0 &&
      (eta_.n_c != cfg.grid.n_c || std::abs(eta_.dt - cfg.grid.dt_ps) > 1e-15)) {
    throw std::invalid_argument("PathEngine: influence table does not match the grid");
  }
  build();
}

void PathEngine::build() {
  cfg_.validate();
  const double dt = cfg_.grid.dt_ps;
  nsteps_ = static_cast<int>(std::lround(cfg_.horizon_ps() / dt));
  n_c_eff_ = (cfg_.bath.lambda > 0.0) ? cfg_.grid.n_c : 1;
  eps_ = tables_.polaron_shift() - cfg_.system.detuning_ps;
  const double gamma = cfg_.system.gamma_ps;
  d_ = std::exp(-gamma * dt);

  InfluenceWeights w = influence_weights(eta_);
  prop_.emplace(w, n_c_eff_, cfg_.engine.memory_cap_gib * 1073741824.0);

  m_free_ = step_propagator(0.0, eps_, gamma, dt);

  props_.clear();
  windows_.clear();
  full_ranges_.clear();
  if (drive_enabled_) {
    for (int k = 0; k < nsteps_; ++k) {
      const double tm = (k + 0.5) * dt;
      if (pulse_is_on(tm, cfg_.pulses)) {
        props_.emplace(k, step_propagator(pulse_envelope(tm, cfg_.pulses), eps_, gamma, dt));
      }
    }
    int run_a = -1, prev = -2;
    for (const auto& [k, m] : props_) {
      (void)m;
      if (k != prev + 1) {
        if (run_a >= 0) windows_.emplace_back(run_a, prev);
        run_a = k;
      }
      prev = k;
    }
    if (run_a >= 0) windows_.emplace_back(run_a, prev);
    for (const auto& [a, b] : windows_) {
      int fa = std::max(0, a - n_c_eff_ - 1);
      int fb = std::min(b + 1 + n_c_eff_, nsteps_);
      if (!full_ranges_.empty() && fa <= full_ranges_.back().second) {
        full_ranges_.back().second = std::max(full_ranges_.back().second, fb);
      } else {
        full_ranges_.emplace_back(fa, fb);
      }
    }
  }

  if (cfg_.engine.kernel_mode == "discrete") {
    f_sat_ = m_free_(1, 1) * w.sat_gx();
  } else {
    const cplx rate(-gamma / 2.0, eps_ - tables_.polaron_shift());
    f_sat_ = std::exp(rate * dt);
  }

  line_done_ = false;
  refs_done_ = false;
  entry_reps_.clear();
  refs_.clear();
  stats_ = InvariantStats{};
}

void PathEngine::disable_drive() {
  drive_enabled_ = false;
  build();
}

bool PathEngine::in_full_range(int step) const {
  for (const auto& [fa, fb] : full_ranges_) {
    if (step > fa && step <= fb) return true;
  }
  return false;
}

bool PathEngine::near_window(int step) const {
  for (const auto& [a, b] : windows_) {
    if (step >= a - n_c_eff_ && step <= b + n_c_eff_) return true;
  }
  return false;
}

const Mat4& PathEngine::step_matrix(int k) const {
  auto it = props_.find(k);
  return it == props_.end() ? m_free_ : it->second;
}

std::vector<cplx> PathEngine::kernel(const std::string& mode, int nmax) const {
  if (mode != "exact" && mode != "fresh" && mode != "qrt") {
    throw std::invalid_argument("PathEngine::kernel: unknown mode " + mode);
  }
  const double dt = cfg_.grid.dt_ps;
  const double gamma = cfg_.system.gamma_ps;
  std::vector<cplx> k(static_cast<std::size_t>(nmax));
  const InfluenceWeights& w = prop_->weights();

  if (cfg_.engine.kernel_mode == "continuum") {
    const double phi0 = tables_.phi0();
    const cplx rate(-gamma / 2.0, eps_ - tables_.polaron_shift());
    for (int j = 0; j < nmax; ++j) {
      const double tau = j * dt;
      cplx ph = (tau <= kPhiSupportPs) ? tables_.phi(tau) : cplx(0.0, 0.0);
      if (mode != "exact") ph = std::conj(ph);
      k[static_cast<std::size_t>(j)] = std::exp(ph - phi0) * std::exp(rate * tau);
    }
  } else {
    // step-product form: per-age factors of a coherence seeded into a history
    // of excited-state slices (exact) or into a restarted history (fresh/qrt)
    const int n = n_c_eff_;
    const cplx m11 = m_free_(1, 1);
    std::vector<cplx> f(static_cast<std::size_t>(n) + 1, cplx(1.0, 0.0));
    for (int j = 1; j <= n; ++j) {
      cplx v = w.w0[1] * m11;
      for (int m = 1; m <= n - 1; ++m) {
        const bool seen = (mode == "exact") ? true : (m <= j);
        const int l_old = (m <= j) ? 1 : 3;
        v *= seen ? w.wm_at(m, 1, l_old) : cplx(1.0, 0.0);
      }
      f[static_cast<std::size_t>(j)] = v;
    }
    k[0] = 1.0;
    for (int j = 1; j < nmax; ++j) {
      k[static_cast<std::size_t>(j)] =
          k[static_cast<std::size_t>(j - 1)] * f[static_cast<std::size_t>(std::min(j, n))];
    }
  }
  if (mode == "qrt") {
    for (int j = 1; j < nmax; ++j) k[static_cast<std::size_t>(j)] *= w.w0[1];
  }
  return k;
}

void PathEngine::run_full(AdmTensor& a, int k0, int k1, std::vector<Vec4>* readouts) const {
  for (int k = k0; k < k1; ++k) {
    prop_->step(a, step_matrix(k));
    if (readouts) readouts->push_back(AdmPropagator::reduce(a));
  }
}

Rep PathEngine::free_fill(std::vector<Vec4>* red, const Rep& rep, int k0, int k1) const {
  const cplx pg = rep(0), px = rep(1), gx = rep(2), xg = rep(3);
  double dk = 1.0;
  cplx fk(1.0, 0.0);
  for (int j = 1; j <= k1 - k0; ++j) {
    dk *= d_;
    fk *= f_sat_;
    if (red) {
      Vec4 row;
      row << pg + px * (1.0 - dk), gx * fk, xg * std::conj(fk), px * dk;
      (*red)[static_cast<std::size_t>(k0 + j)] = row;
    }
  }
  Rep out;
  out << pg + px * (1.0 - dk), px * dk, gx * fk, xg * std::conj(fk);
  if (k1 == k0) out = rep;
  return out;
}

AdmTensor PathEngine::expand(const Rep& rep) const {
  const int n = n_c_eff_;
  if (n == 1) {
    Vec4 v;
    v << rep(0), rep(2), rep(3), rep(1);
    return AdmTensor::from_state(v);
  }
  AdmTensor a(n);
  const cplx px = rep(1);
  const double dpow = std::pow(d_, n - 1);
  const cplx px_old = px / dpow;
  // decay ladder of the excited population over the retained history
  a[a.size() - 1] = px;  // excited along every slice
  for (int m = 1; m <= n - 1; ++m) {
    const std::size_t idx = (std::size_t{1} << (2 * (n - m))) - 1;
    a[idx] = px_old * std::pow(d_, n - m - 1) * (1.0 - d_);
  }
  a[0] = rep(0) + px - px_old;
  const std::size_t ones = (a.size() - 1) / 3;
  a[ones] = rep(2);
  a[2 * ones] = rep(3);
  return a;
}

Rep PathEngine::collapse(const AdmTensor& a) const {
  const Vec4 red = AdmPropagator::reduce(a);
  Rep rep;
  if (a.rank() == 1) {
    rep << a[0], a[3], a[1], a[2];
    return rep;
  }
  const std::size_t ones = (a.size() - 1) / 3;
  rep << red(0), red(3), a[ones], a[2 * ones];
  return rep;
}

TimeLine PathEngine::t_line() {
  const bool validate = cfg_.engine.validate_invariants;
  line_.red.assign(static_cast<std::size_t>(nsteps_) + 1, Vec4::Zero());
  Vec4 init;
  init << 1.0, 0.0, 0.0, 0.0;
  line_.red[0] = init;
  Rep rep;
  rep << 1.0, 0.0, 0.0, 0.0;
  entry_reps_.clear();
  int k = 0;
  for (const auto& [fa, fb] : full_ranges_) {
    rep = free_fill(&line_.red, rep, k, fa);
    entry_reps_.push_back(rep);
    AdmTensor a = expand(rep);
    std::vector<Vec4> reads;
    reads.reserve(static_cast<std::size_t>(fb - fa));
    run_full(a, fa, fb, &reads);
    for (int j = 0; j < fb - fa; ++j) {
      line_.red[static_cast<std::size_t>(fa + 1 + j)] = reads[static_cast<std::size_t>(j)];
    }
    rep = collapse(a);
    k = fb;
  }
  free_fill(&line_.red, rep, k, nsteps_);

  line_.occ.resize(line_.red.size());
  line_.stats = InvariantStats{};
  for (std::size_t i = 0; i < line_.red.size(); ++i) {
    line_.occ[i] = line_.red[i](3).real();
    if (validate) line_.stats.absorb(check_state(line_.red[i]));
  }
  stats_.absorb(line_.stats);
  line_done_ = true;
  return line_;
}

AdmTensor PathEngine::window_tensor_at(int step) const {
  if (!line_done_) throw std::logic_error("window_tensor_at: t_line has not run");
  for (std::size_t i = 0; i < full_ranges_.size(); ++i) {
    const auto& [fa, fb] = full_ranges_[i];
    if (step > fa && step <= fb) {
      AdmTensor a = expand(entry_reps_[i]);
      run_full(a, fa, step);
      return a;
    }
  }
  throw std::logic_error("window_tensor_at: step is outside every propagation range");
}

const std::vector<CrossingRef>& PathEngine::crossing_refs() {
  if (refs_done_) return refs_;
  refs_.clear();
  for (const auto& [a, b] : windows_) {
    CrossingRef ref;
    ref.a = a;
    ref.k1 = std::min(b + 1 + n_c_eff_, nsteps_);
    ref.nw = ref.k1 - a;
    Rep seeds[3];
    seeds[0] << 1.0, 0.0, 0.0, 0.0;
    seeds[1] << 0.0, 1.0, 0.0, 0.0;
    seeds[2] << 0.0, 0.0, 1.0, 0.0;
    std::vector<Vec4>* reads[3] = {&ref.g, &ref.x, &ref.gx};
    Rep* outs[3] = {&ref.g_out, &ref.x_out, &ref.gx_out};
    for (int s = 0; s < 3; ++s) {
      AdmTensor t = expand(seeds[s]);
      reads[s]->reserve(static_cast<std::size_t>(ref.nw));
      run_full(t, a, ref.k1, reads[s]);
      *outs[s] = collapse(t);
    }
    refs_.push_back(std::move(ref));
  }
  refs_done_ = true;
  return refs_;
}

namespace {

// advances a collapsed object across a drive-free stretch, filling row
// entries (j, j1]; kern non-null means the object is still kernel-fresh
void advance_stretch(const Rep& in, Rep& out, TauRow& row, int j, int j1,
                     const std::vector<cplx>* kern, double d, cplx f_sat) {
  cplx ratio(1.0, 0.0);
  if (kern) {
    const cplx base = in(2) / (*kern)[static_cast<std::size_t>(j)];
    for (int jj = j + 1; jj <= j1; ++jj) {
      row.c[static_cast<std::size_t>(jj)] = base * (*kern)[static_cast<std::size_t>(jj)];
    }
    ratio = (*kern)[static_cast<std::size_t>(j1)] / (*kern)[static_cast<std::size_t>(j)];
  } else {
    cplx fk(1.0, 0.0);
    for (int jj = j + 1; jj <= j1; ++jj) {
      fk *= f_sat;
      row.c[static_cast<std::size_t>(jj)] = in(2) * fk;
    }
    ratio = fk;
  }
  double dk = 1.0;
  for (int jj = j + 1; jj <= j1; ++jj) {
    dk *= d;
    row.o[static_cast<std::size_t>(jj)] = in(1) * dk;
  }
  out(0) = in(0) + in(1) * (1.0 - dk);
  out(1) = in(1) * dk;
  out(2) = in(2) * ratio;
  out(3) = in(3) * std::conj(ratio);
}

}  // namespace

void PathEngine::synth_row(int i_t, int ntau, Rep rep, const std::vector<cplx>* kern, int j0,
                           TauRow& row, bool herm) {
  const int jn = ntau - 1;
  row.c.assign(static_cast<std::size_t>(ntau), cplx(0.0, 0.0));
  row.o.assign(static_cast<std::size_t>(ntau), cplx(0.0, 0.0));
  int j = j0;
  bool fresh = (kern != nullptr);
  crossing_refs();
  for (const auto& ref : refs_) {
    if (ref.k1 <= i_t + j) continue;  // window already behind the object
    if (ref.a >= i_t + jn) break;     // row ends before this window starts
    const int j1 = std::min(ref.a - i_t, jn);
    Rep next;
    advance_stretch(rep, next, row, j, j1, fresh ? kern : nullptr, d_, f_sat_);
    rep = next;
    if (herm) rep(3) = std::conj(rep(2));
    if (j1 == jn) return;
    j = j1;
    // carry through the window by the basis responses
    const int take = std::min(ref.nw, jn - j);
    for (int i = 0; i < take; ++i) {
      const std::size_t ui = static_cast<std::size_t>(i);
      const Vec4 r4 = rep(0) * ref.g[ui] + rep(1) * ref.x[ui] + rep(2) * ref.gx[ui] +
                      rep(3) * mirror_read(ref.gx[ui]);
      row.c[static_cast<std::size_t>(j + 1 + i)] = r4(1);
      row.o[static_cast<std::size_t>(j + 1 + i)] = r4(3);
    }
    rep = rep(0) * ref.g_out + rep(1) * ref.x_out + rep(2) * ref.gx_out +
          rep(3) * mirror_rep(ref.gx_out);
    j += ref.nw;
    if (j >= jn) return;
    fresh = false;
    if (herm) rep(3) = std::conj(rep(2));
  }
  Rep next;
  advance_stretch(rep, next, row, j, jn, fresh ? kern : nullptr, d_, f_sat_);
}

PathEngine::ColumnPair PathEngine::kernel_column(int i_t, int ntau, const std::string& mode,
                                                 const std::vector<cplx>& kern) {
  (void)mode;
  if (!line_done_) throw std::logic_error("kernel_column: t_line has not run");
  const Vec4& r = line_.red[static_cast<std::size_t>(i_t)];
  Rep rep1, rep2;
  rep1 << r(2), 0.0, r(3), 0.0;  // s^- rho: (pG, pX, cGX, cXG)
  rep2 << r(3), 0.0, 0.0, 0.0;   // s^- rho s^+
  TauRow row1, row2;
  synth_row(i_t, ntau, rep1, &kern, 0, row1);
  synth_row(i_t, ntau, rep2, &kern, 0, row2);
  ColumnPair out;
  out.g1 = std::move(row1.c);
  out.g1[0] = r(3);
  out.g2 = std::move(row2.o);
  out.g2[0] = 0.0;
  return out;
}

PathEngine::ColumnPair PathEngine::real_column(int i_t, int ntau, const std::string& mode) {
  if (!line_done_) throw std::logic_error("real_column: t_line has not run");
  if (mode != "exact" && mode != "qrt") {
    throw std::invalid_argument("real_column: mode must be 'exact' or 'qrt'");
  }
  const int jn = ntau - 1;
  int fb_here = -1;
  for (const auto& [fa, fb] : full_ranges_) {
    if (i_t > fa && i_t <= fb) fb_here = fb;
  }
  if (fb_here < 0) throw std::logic_error("real_column: emission step is not near a window");
  int k_end = std::max(i_t + n_c_eff_, fb_here);
  k_end = std::min(k_end, i_t + jn);

  AdmTensor b1, b2;
  if (mode == "exact") {
    AdmTensor a = window_tensor_at(i_t);
    b1 = a;
    AdmPropagator::insert_lower_left(b1);
    b2 = std::move(a);
    AdmPropagator::insert_lower_sandwich(b2);
  } else {
    const Vec4& r = line_.red[static_cast<std::size_t>(i_t)];
    Vec4 v1, v2;
    v1 << r(2), r(3), 0.0, 0.0;
    v2 << r(3), 0.0, 0.0, 0.0;
    b1 = AdmTensor::from_state(v1);
    b2 = AdmTensor::from_state(v2);
  }

  ColumnPair out;
  out.g1.assign(static_cast<std::size_t>(ntau), cplx(0.0, 0.0));
  out.g2.assign(static_cast<std::size_t>(ntau), cplx(0.0, 0.0));
  out.g1[0] = AdmPropagator::reduce(b1)(1);
  out.g2[0] = AdmPropagator::reduce(b2)(3);

  if (mode == "qrt") {
    // restarted history: the seed slice carries its self weight from the
    // first propagation step on; the tau=0 readout above stays unweighted
    prop_->apply_seed_weights(b1);
    prop_->apply_seed_weights(b2);
  }

  std::vector<Vec4> reads1, reads2;
  run_full(b1, i_t, k_end, &reads1);
  run_full(b2, i_t, k_end, &reads2);
  for (int j = 1; j <= k_end - i_t; ++j) {
    out.g1[static_cast<std::size_t>(j)] = reads1[static_cast<std::size_t>(j - 1)](1);
    out.g2[static_cast<std::size_t>(j)] = reads2[static_cast<std::size_t>(j - 1)](3);
  }
  if (k_end - i_t < jn) {
    TauRow row1, row2;
    synth_row(i_t, ntau, collapse(b1), nullptr, k_end - i_t, row1);
    synth_row(i_t, ntau, collapse(b2), nullptr, k_end - i_t, row2);
    for (int j = k_end - i_t + 1; j <= jn; ++j) {
      out.g1[static_cast<std::size_t>(j)] = row1.c[static_cast<std::size_t>(j)];
      out.g2[static_cast<std::size_t>(j)] = row2.o[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

}  // namespace qdemit
