#include "qdemit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qdemit/correlators.hpp"
#include "qdemit/io.hpp"

namespace qdemit {

namespace {

const char* kModeOrder[3] = {"exact", "qrt", "pme"};

RunConfig point_config(const RunConfig& cfg, double temperature_K, double lambda) {
  RunConfig p = cfg;
  p.bath.temperature_K = temperature_K;
  p.bath.lambda = lambda;
  return p;
}

std::vector<std::string> ordered_modes(const std::vector<std::string>& requested) {
  std::set<std::string> have(requested.begin(), requested.end());
  std::vector<std::string> out;
  for (const char* m : kModeOrder)
    if (have.count(m)) out.emplace_back(m);
  return out;
}

std::uint64_t point_hash(const RunConfig& pt, const std::vector<std::string>& modes) {
  std::string tag;
  for (const std::string& m : modes) tag += m + ";";
  return fnv1a(tag.data(), tag.size(), pt.config_hash());
}

std::string point_cache_name(double temperature_K, double lambda) {
  return "point_T" + fmt_g(temperature_K) + "_lam" + fmt_g(lambda) + ".json";
}

EtaTable point_eta(const RunConfig& pt, const std::string& cache_dir) {
  const EtaCacheKey key{pt.grid.dt_ps, pt.grid.n_c, pt.bath.lambda, pt.bath.temperature_K,
                        pt.material_hash()};
  const std::string path = eta_cache_path(cache_dir, key);
  EtaTable eta;
  if (load_eta_table(path, key, &eta)) return eta;
  const BathTables tables(pt.bath, pt.engine.quad_nodes);
  eta = compute_eta_table(tables, pt.grid.dt_ps, pt.grid.n_c);
  ensure_directory(cache_dir);
  store_eta_table(path, key, eta);
  return eta;
}

std::vector<SweepRow> rows_from_result(const RunConfig& pt,
                                       const std::vector<std::string>& modes,
                                       const PointResult& res) {
  std::vector<SweepRow> rows;
  const PointCurves* exact =
      res.modes.count("exact") ? &res.modes.at("exact") : nullptr;
  for (const std::string& mode : modes) {
    const PointCurves& pc = res.modes.at(mode);
    SweepRow r;
    r.temperature_K = pt.bath.temperature_K;
    r.lambda = pt.bath.lambda;
    r.mode = mode;
    r.purity = pc.purity;
    r.indistinguishability = pc.indistinguishability;
    r.brightness = pc.brightness;
    if (exact && mode != "exact") {
      r.q_p = relative_error(exact->purity, pc.purity);
      r.q_i = relative_error(exact->indistinguishability, pc.indistinguishability);
      r.has_q = true;
    }
    if (mode == "exact" && res.n_computed) {
      r.n_measure = res.n_measure;
      r.has_n = true;
    }
    r.dt_ps = res.dt_ps;
    r.n_c = res.n_c;
    r.stride = res.stride;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> error_rows(const RunConfig& pt, const std::vector<std::string>& modes,
                                 const std::string& message) {
  std::vector<SweepRow> rows;
  for (const std::string& mode : modes) {
    SweepRow r;
    r.temperature_K = pt.bath.temperature_K;
    r.lambda = pt.bath.lambda;
    r.mode = mode;
    r.dt_ps = pt.grid.dt_ps;
    r.n_c = pt.grid.n_c;
    r.stride = pt.grid.stride;
    r.error = message;
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json rows_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json j;
    j["mode"] = r.mode;
    j["P"] = r.purity;
    j["I"] = r.indistinguishability;
    j["B"] = r.brightness;
    if (r.has_q) {
      j["Q_P"] = r.q_p;
      j["Q_I"] = r.q_i;
    }
    if (r.has_n) j["N"] = r.n_measure;
    j["dt"] = r.dt_ps;
    j["n_c"] = r.n_c;
    j["stride"] = r.stride;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<SweepRow> rows_from_json(const RunConfig& pt, const nlohmann::json& arr) {
  std::vector<SweepRow> rows;
  for (const auto& j : arr) {
    SweepRow r;
    r.temperature_K = pt.bath.temperature_K;
    r.lambda = pt.bath.lambda;
    r.mode = j.at("mode").get<std::string>();
    r.purity = j.value("P", 0.0);
    r.indistinguishability = j.value("I", 0.0);
    r.brightness = j.value("B", 0.0);
    if (j.count("Q_P")) {
      r.q_p = j.at("Q_P").get<double>();
      r.q_i = j.at("Q_I").get<double>();
      r.has_q = true;
    }
    if (j.count("N")) {
      r.n_measure = j.at("N").get<double>();
      r.has_n = true;
    }
    r.dt_ps = j.value("dt", 0.0);
    r.n_c = j.value("n_c", 0);
    r.stride = j.value("stride", 0);
    r.error = j.value("error", std::string());
    rows.push_back(std::move(r));
  }
  return rows;
}

// one grid point: cached rows when resumable, fresh computation otherwise
std::vector<SweepRow> compute_point(const RunConfig& cfg, double temperature_K, double lambda,
                                    const std::string& out_dir, bool resume) {
  const RunConfig pt = point_config(cfg, temperature_K, lambda);
  const std::vector<std::string> modes = ordered_modes(cfg.sweep.modes);
  const std::uint64_t hash = point_hash(pt, modes);
  const std::string cache_path =
      out_dir.empty() ? std::string()
                      : out_dir + "/points/" + point_cache_name(temperature_K, lambda);

  if (resume && !cache_path.empty()) {
    try {
      const nlohmann::json j = nlohmann::json::parse(read_text_file(cache_path));
      char want[32];
      std::snprintf(want, sizeof(want), "%016llx", static_cast<unsigned long long>(hash));
      if (j.at("hash").get<std::string>() == want)
        return rows_from_json(pt, j.at("rows"));
    } catch (const std::exception&) {
      // unreadable cache entries are recomputed
    }
  }

  std::vector<SweepRow> rows;
  try {
    PointOptions opt;
    const bool want_path = std::any_of(modes.begin(), modes.end(), [](const std::string& m) {
      return m == "exact" || m == "qrt";
    });
    EtaTable eta;
    // the decoupled table is all zeros, not worth a cache entry
    if (want_path && pt.bath.lambda > 0.0) {
      eta = point_eta(pt, cache_directory());
      opt.eta = &eta;
    }
    opt.with_blp = std::count(modes.begin(), modes.end(), "exact") > 0;
    if (pt.output.dump_grids && !out_dir.empty())
      opt.dump_dir = out_dir + "/grids/T" + fmt_g(temperature_K) + "_lam" + fmt_g(lambda);
    const PointResult res = run_point(pt, modes, opt);
    rows = rows_from_result(pt, modes, res);
  } catch (const std::exception& e) {
    rows = error_rows(pt, modes, e.what());
  }

  if (!cache_path.empty()) {
    ensure_directory(out_dir + "/points");
    nlohmann::json j;
    char hs[32];
    std::snprintf(hs, sizeof(hs), "%016llx", static_cast<unsigned long long>(hash));
    j["hash"] = hs;
    j["rows"] = rows_to_json(rows);
    write_text_file(cache_path, j.dump(2) + "\n");
  }
  return rows;
}

std::string csv_cell(double v, bool present) { return present ? fmt_g(v) : std::string(); }

}  // namespace

std::string results_csv_text(const std::vector<SweepRow>& rows) {
  std::string text = "T_K,lambda,mode,P,I,B,Q_P,Q_I,N,dt,n_c,stride,error\n";
  for (const SweepRow& r : rows) {
    const bool ok = r.error.empty();
    text += fmt_g(r.temperature_K);
    text += ',';
    text += fmt_g(r.lambda);
    text += ',';
    text += r.mode;
    text += ',';
    text += csv_cell(r.purity, ok);
    text += ',';
    text += csv_cell(r.indistinguishability, ok);
    text += ',';
    text += csv_cell(r.brightness, ok);
    text += ',';
    text += csv_cell(r.q_p, ok && r.has_q);
    text += ',';
    text += csv_cell(r.q_i, ok && r.has_q);
    text += ',';
    text += csv_cell(r.n_measure, ok && r.has_n);
    text += ',';
    text += fmt_g(r.dt_ps);
    text += ',';
    text += std::to_string(r.n_c);
    text += ',';
    text += std::to_string(r.stride);
    text += ',';
    // commas inside error messages would break the column count
    std::string msg = r.error;
    for (char& c : msg)
      if (c == ',' || c == '\n') c = ';';
    text += msg;
    text += '\n';
  }
  return text;
}

void write_heatmaps(const RunConfig& cfg, const std::vector<SweepRow>& rows,
                    const std::string& out_dir) {
  const auto& ts = cfg.sweep.temperatures_K;
  const auto& ls = cfg.sweep.lambdas;
  auto cell = [&](double t, double l, const std::string& mode,
                  double SweepRow::* field, bool SweepRow::* flag) -> std::string {
    for (const SweepRow& r : rows) {
      if (r.temperature_K != t || r.lambda != l || r.mode != mode) continue;
      if (!r.error.empty()) return std::string();
      if (flag && !(r.*flag)) return std::string();
      return fmt_g(r.*field);
    }
    return std::string();
  };
  struct Sheet {
    const char* name;
    const char* mode;
    double SweepRow::* field;
    bool SweepRow::* flag;
  };
  const Sheet sheets[] = {
      {"P_exact", "exact", &SweepRow::purity, nullptr},
      {"I_exact", "exact", &SweepRow::indistinguishability, nullptr},
      {"B_exact", "exact", &SweepRow::brightness, nullptr},
      {"N", "exact", &SweepRow::n_measure, &SweepRow::has_n},
      {"Q_P_qrt", "qrt", &SweepRow::q_p, &SweepRow::has_q},
      {"Q_I_qrt", "qrt", &SweepRow::q_i, &SweepRow::has_q},
      {"Q_P_pme", "pme", &SweepRow::q_p, &SweepRow::has_q},
      {"Q_I_pme", "pme", &SweepRow::q_i, &SweepRow::has_q},
  };
  for (const Sheet& sh : sheets) {
    const bool any = std::any_of(rows.begin(), rows.end(), [&](const SweepRow& r) {
      return r.mode == sh.mode && r.error.empty() && (!sh.flag || r.*(sh.flag));
    });
    if (!any) continue;
    std::string text = "T_K";
    for (double l : ls) text += ",lambda=" + fmt_g(l);
    text += '\n';
    for (double t : ts) {
      text += fmt_g(t);
      for (double l : ls) {
        text += ',';
        text += cell(t, l, sh.mode, sh.field, sh.flag);
      }
      text += '\n';
    }
    write_text_file(out_dir + "/heatmap_" + sh.name + ".csv", text);
  }
}

SweepOutcome run_sweep(const RunConfig& cfg, const std::string& out_dir, int workers,
                       bool resume) {
  cfg.validate();
  if (!out_dir.empty()) ensure_directory(out_dir);

  struct Task {
    double temperature_K;
    double lambda;
  };
  std::vector<Task> tasks;
  for (double t : cfg.sweep.temperatures_K)
    for (double l : cfg.sweep.lambdas) tasks.push_back({t, l});
  std::vector<std::vector<SweepRow>> slots(tasks.size());

  std::atomic<size_t> next{0};
  std::mutex log_mu;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto start = std::chrono::steady_clock::now();
      slots[i] = compute_point(cfg, tasks[i].temperature_K, tasks[i].lambda, out_dir, resume);
      const double sec =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::lock_guard<std::mutex> lk(log_mu);
      const bool ok = std::all_of(slots[i].begin(), slots[i].end(),
                                  [](const SweepRow& r) { return r.error.empty(); });
      std::fprintf(stderr, "[sweep] T=%s lambda=%s %s (%.1fs)\n",
                   fmt_g(tasks[i].temperature_K).c_str(), fmt_g(tasks[i].lambda).c_str(),
                   ok ? "done" : "FAILED", sec);
    }
  };

  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nw));
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  SweepOutcome out;
  for (auto& rows : slots)
    for (auto& r : rows) {
      out.all_ok = out.all_ok && r.error.empty();
      out.rows.push_back(std::move(r));
    }
  if (!out_dir.empty()) {
    out.results_path = out_dir + "/results.csv";
    write_text_file(out.results_path, results_csv_text(out.rows));
    write_heatmaps(cfg, out.rows, out_dir);
  }
  return out;
}

SweepOutcome run_single_point(const RunConfig& cfg, double temperature_K, double lambda,
                              const std::string& out_dir) {
  RunConfig c = cfg;
  c.sweep.temperatures_K = {temperature_K};
  c.sweep.lambdas = {lambda};
  return run_sweep(c, out_dir, 1, false);
}

std::vector<ConvergenceRung> default_ladder() {
  return {{0.5, 7, 8}, {0.5, 7, 4}, {0.25, 12, 4}};
}

std::string convergence_report(const RunConfig& cfg,
                               const std::vector<ConvergenceRung>& ladder) {
  if (ladder.empty()) throw std::invalid_argument("convergence ladder is empty");
  std::string text =
      "dt_ps  n_c  stride  P%         I%         B%         occ_after\n";
  double prev_p = 0, prev_i = 0, prev_b = 0, prev_o = 0;
  bool first = true;
  for (const ConvergenceRung& rung : ladder) {
    RunConfig c = cfg;
    c.grid.dt_ps = rung.dt_ps;
    c.grid.n_c = rung.n_c;
    c.grid.stride = rung.stride;
    PointOptions opt;
    opt.with_blp = false;
    const PointResult res = run_point(c, {"exact"}, opt);
    const PointCurves& pc = res.modes.at("exact");
    char line[160];
    std::snprintf(line, sizeof(line), "%-6s %-4d %-7d %-10.6f %-10.6f %-10.6f %-10.6f\n",
                  fmt_g(rung.dt_ps).c_str(), rung.n_c, rung.stride, 100 * pc.purity,
                  100 * pc.indistinguishability, 100 * pc.brightness, pc.occ_after_pulse);
    text += line;
    if (!first) {
      std::snprintf(line, sizeof(line),
                    "  delta vs previous rung: dP=%.4fpp dI=%.4fpp dB=%.4fpp docc=%.2e\n",
                    100 * (pc.purity - prev_p), 100 * (pc.indistinguishability - prev_i),
                    100 * (pc.brightness - prev_b), pc.occ_after_pulse - prev_o);
      text += line;
    }
    prev_p = pc.purity;
    prev_i = pc.indistinguishability;
    prev_b = pc.brightness;
    prev_o = pc.occ_after_pulse;
    first = false;
  }
  return text;
}

}  // namespace qdemit
