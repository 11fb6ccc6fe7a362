#include "qdemit/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "qdemit/io.hpp"
#include "qdemit/nonmarkov.hpp"
#include "qdemit/pme.hpp"

namespace qdemit {

std::vector<int> emission_nodes(const RunConfig& cfg) {
  const double dt = cfg.grid.dt_ps;
  const double t0 = cfg.pulses.t0_ps;
  const double period = cfg.pulses.period_ps;
  const int i_lo = static_cast<int>(std::lround((t0 + period / 2.0) / dt));
  const int i_hi = static_cast<int>(std::lround((t0 + 1.5 * period) / dt));
  std::vector<int> nodes;
  for (int i = i_lo; i <= i_hi; i += cfg.grid.stride) nodes.push_back(i);
  return nodes;
}

int tau_points(const RunConfig& cfg) {
  return static_cast<int>(
             std::lround(cfg.grid.tau_max_factor * cfg.pulses.period_ps / cfg.grid.dt_ps)) +
         1;
}

PointCurves assemble_curves(const RunConfig& cfg, const std::vector<double>& occ_line,
                            const RowFill& fill, std::vector<GridDumpRow>* dump) {
  const double dt = cfg.grid.dt_ps;
  const std::vector<int> nodes = emission_nodes(cfg);
  const int ntau = tau_points(cfg);
  if (nodes.size() < 2) throw std::invalid_argument("emission window holds fewer than two nodes");

  std::vector<double> w(nodes.size(), 1.0);
  w.front() = w.back() = 0.5;
  double wsum = 0.0;
  for (double v : w) wsum += v;

  PointCurves pc;
  pc.avg_g1.assign(static_cast<size_t>(ntau), cplx(0.0));
  pc.avg_g2.assign(static_cast<size_t>(ntau), 0.0);
  pc.avg_hom.assign(static_cast<size_t>(ntau), 0.0);

  std::vector<cplx> g1, g2;
  std::vector<double> hom(static_cast<size_t>(ntau));
  const int ds = std::max(1, cfg.output.dump_stride);
  for (size_t idx = 0; idx < nodes.size(); ++idx) {
    const int i_t = nodes[idx];
    fill(i_t, g1, g2);
    const double occ_i = occ_line[static_cast<size_t>(i_t)];
    for (int j = 0; j < ntau; ++j) {
      const size_t sj = static_cast<size_t>(j);
      const size_t oj = static_cast<size_t>(i_t + j);
      const double occ_j = oj < occ_line.size() ? occ_line[oj] : 0.0;
      const double a1 = std::norm(g1[sj]);
      hom[sj] = 0.5 * (occ_i * occ_j - a1 + g2[sj].real());
      pc.cs_excess = std::max(pc.cs_excess, a1 - occ_i * occ_j);
      pc.avg_g1[sj] += w[idx] * g1[sj];
      pc.avg_g2[sj] += w[idx] * g2[sj].real();
      pc.avg_hom[sj] += w[idx] * hom[sj];
    }
    if (dump && idx % static_cast<size_t>(ds) == 0) {
      for (int j = 0; j < ntau; j += ds)
        dump->push_back({i_t * dt, j * dt, g1[static_cast<size_t>(j)],
                         g2[static_cast<size_t>(j)].real(), hom[static_cast<size_t>(j)]});
    }
  }
  for (int j = 0; j < ntau; ++j) {
    const size_t sj = static_cast<size_t>(j);
    pc.avg_g1[sj] /= wsum;
    pc.avg_g2[sj] /= wsum;
    pc.avg_hom[sj] /= wsum;
  }

  const double period = cfg.pulses.period_ps;
  pc.purity = purity(pc.avg_g2, dt, period);
  pc.indistinguishability = indistinguishability(pc.avg_hom, dt, period);
  pc.brightness = brightness(occ_line, dt, cfg.pulses.t0_ps, period, cfg.system.gamma_ps);

  pc.g2_min = *std::min_element(pc.avg_g2.begin(), pc.avg_g2.end());
  pc.hom_min = *std::min_element(pc.avg_hom.begin(), pc.avg_hom.end());
  if (pc.g2_min < -1e-12 || pc.hom_min < -1e-12)
    std::fprintf(stderr,
                 "warning: negative coincidence values clipped (g2 min %.3e, hom min %.3e)\n",
                 pc.g2_min, pc.hom_min);
  for (double& v : pc.avg_g2) v = std::max(0.0, v);
  for (double& v : pc.avg_hom) v = std::max(0.0, v);
  if (pc.indistinguishability < 0.5 - 1e-3 || pc.indistinguishability > 1.0 + 1e-3)
    std::fprintf(stderr, "warning: indistinguishability %.6f outside [1/2, 1]\n",
                 pc.indistinguishability);

  pc.occ_line = occ_line;
  const size_t iafter = std::min(
      occ_line.size() - 1,
      static_cast<size_t>(std::lround(
          (cfg.pulses.t0_ps + 5.0 * cfg.pulses.sigma_ps()) / dt)));
  pc.occ_after_pulse = occ_line[iafter];
  return pc;
}

namespace {

void write_grid_dump(const std::string& dir, const std::string& mode,
                     const std::vector<GridDumpRow>& rows) {
  std::string text = "t_ps,tau_ps,g1_re,g1_im,g2,hom\n";
  for (const GridDumpRow& r : rows) {
    text += fmt_g(r.t_ps);
    text += ',';
    text += fmt_g(r.tau_ps);
    text += ',';
    text += fmt_g(r.g1.real());
    text += ',';
    text += fmt_g(r.g1.imag());
    text += ',';
    text += fmt_g(r.g2);
    text += ',';
    text += fmt_g(r.hom);
    text += '\n';
  }
  write_text_file(dir + "/grid_" + mode + ".csv", text);
}

}  // namespace

PointResult run_point(const RunConfig& cfg, const std::vector<std::string>& modes,
                      const PointOptions& opt) {
  cfg.validate();
  // the side-peak window reaches 1.5 periods past the second-period nodes
  if (cfg.pulses.count < 3)
    throw std::invalid_argument(
        "correlation averaging needs at least three pulse periods; raise pulses.count");
  for (const std::string& m : modes)
    if (m != "exact" && m != "qrt" && m != "pme")
      throw std::invalid_argument("unknown propagation mode: " + m);

  PointResult pr;
  pr.dt_ps = cfg.grid.dt_ps;
  pr.n_c = cfg.grid.n_c;
  pr.stride = cfg.grid.stride;

  const int ntau = tau_points(cfg);
  const bool dumping = !opt.dump_dir.empty();
  std::map<std::string, std::vector<GridDumpRow>> dumps;

  const bool want_path = std::any_of(modes.begin(), modes.end(), [](const std::string& m) {
    return m == "exact" || m == "qrt";
  });
  std::optional<PathEngine> eng;
  if (want_path) {
    if (opt.eta && opt.eta->dt == cfg.grid.dt_ps && opt.eta->n_c == cfg.grid.n_c)
      eng.emplace(cfg, *opt.eta);
    else
      eng.emplace(cfg);
    eng->t_line();
  }

  std::set<std::string> done;
  for (const std::string& mode : modes) {
    if (!done.insert(mode).second) continue;
    std::vector<GridDumpRow>* dump = dumping ? &dumps[mode] : nullptr;
    if (mode == "pme") {
      PmeEngine pme(cfg);
      pr.modes[mode] = pme.point_curves(dump);
      continue;
    }
    const std::vector<cplx> kern = eng->kernel(mode, ntau);
    auto fill = [&](int i_t, std::vector<cplx>& g1, std::vector<cplx>& g2) {
      PathEngine::ColumnPair cp = eng->near_window(i_t)
                                      ? eng->real_column(i_t, ntau, mode)
                                      : eng->kernel_column(i_t, ntau, mode, kern);
      g1 = std::move(cp.g1);
      g2 = std::move(cp.g2);
    };
    PointCurves pc = assemble_curves(cfg, eng->line().occ, fill, dump);
    pc.stats = eng->stats();
    pr.modes[mode] = std::move(pc);
  }

  if (opt.with_blp) {
    pr.n_measure = non_markovianity(cfg).n;
    pr.n_computed = true;
  }

  if (dumping) {
    ensure_directory(opt.dump_dir);
    for (const auto& [mode, rows] : dumps) write_grid_dump(opt.dump_dir, mode, rows);
    nlohmann::json meta;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    meta["config_hash"] = hash;
    meta["dt_ps"] = cfg.grid.dt_ps;
    meta["stride"] = cfg.grid.stride;
    meta["dump_stride"] = cfg.output.dump_stride;
    meta["tau_points"] = ntau;
    for (const auto& [mode, rows] : dumps) meta["modes"].push_back(mode);
    write_text_file(opt.dump_dir + "/grid_meta.json", meta.dump(2) + "\n");
  }
  return pr;
}

}  // namespace qdemit
