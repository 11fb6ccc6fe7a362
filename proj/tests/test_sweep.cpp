#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "qdemit/io.hpp"
#include "qdemit/sweep.hpp"

#include "test_support.hpp"

using namespace qdemit;
using qdemit::testing::small_cfg;

namespace fs = std::filesystem;

namespace {

RunConfig tiny_sweep_cfg() {
  RunConfig cfg = small_cfg(0.0, 4.0);
  cfg.sweep.temperatures_K = {4.0};
  cfg.sweep.lambdas = {0.0, 1.0};
  cfg.sweep.modes = {"exact", "qrt", "pme"};
  return cfg;
}

size_t count_char(const std::string& s, char c) {
  size_t n = 0;
  for (char x : s) n += (x == c);
  return n;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("tiny grid sweeps in canonical order and resumes bit-identically") {
  const std::string dir = "sweep_out_a";
  fs::remove_all(dir);
  setenv("QDSIM_CACHE_DIR", "sweep_eta_cache", 1);
  const RunConfig cfg = tiny_sweep_cfg();
  const SweepOutcome out = run_sweep(cfg, dir, 1, false);
  CHECK(out.all_ok);
  REQUIRE(out.rows.size() == 6);

  const char* want_modes[6] = {"exact", "qrt", "pme", "exact", "qrt", "pme"};
  const double want_lambda[6] = {0, 0, 0, 1, 1, 1};
  for (size_t i = 0; i < 6; ++i) {
    CHECK(out.rows[i].mode == want_modes[i]);
    CHECK(out.rows[i].lambda == want_lambda[i]);
    CHECK(out.rows[i].error.empty());
  }
  // the exact row carries the divisibility measure, approximations carry Q
  CHECK(out.rows[0].has_n);
  CHECK_FALSE(out.rows[0].has_q);
  CHECK(out.rows[1].has_q);
  CHECK(out.rows[2].has_q);
  // regression and exact propagation coincide without phonons
  CHECK(out.rows[1].q_p < 1e-9);
  CHECK(out.rows[1].q_i < 1e-9);
  CHECK(out.rows[2].q_p < 1e-5);
  CHECK(std::abs(out.rows[0].n_measure) < 1e-8);
  // phonons separate the regression figure from the exact one
  CHECK(out.rows[4].q_i > 1e-6);
  CHECK(out.rows[4].q_i < 0.3);

  REQUIRE(fs::exists(out.results_path));
  const std::string csv = read_text_file(out.results_path);
  const std::vector<std::string> ls = lines_of(csv);
  REQUIRE(ls.size() == 7);
  CHECK(ls[0] == "T_K,lambda,mode,P,I,B,Q_P,Q_I,N,dt,n_c,stride,error");
  for (const std::string& l : ls) CHECK(count_char(l, ',') == 12);

  CHECK(fs::exists(dir + "/heatmap_P_exact.csv"));
  CHECK(fs::exists(dir + "/heatmap_I_exact.csv"));
  CHECK(fs::exists(dir + "/heatmap_N.csv"));
  CHECK(fs::exists(dir + "/heatmap_Q_I_qrt.csv"));
  CHECK(fs::exists(dir + "/heatmap_Q_I_pme.csv"));
  const std::vector<std::string> hm = lines_of(read_text_file(dir + "/heatmap_P_exact.csv"));
  REQUIRE(hm.size() == 2);
  CHECK(hm[0] == "T_K,lambda=0,lambda=1");
  CHECK(hm[1].substr(0, 2) == "4,");

  // a resumed sweep must reuse the point caches and rewrite identical bytes
  CHECK(fs::exists(dir + "/points"));
  const SweepOutcome again = run_sweep(cfg, dir, 1, true);
  CHECK(again.all_ok);
  CHECK(read_text_file(again.results_path) == csv);
  fs::remove_all(dir);
  fs::remove_all("sweep_eta_cache");
  unsetenv("QDSIM_CACHE_DIR");
}

TEST_CASE("point failures land in the error column and the sweep continues") {
  const std::string dir = "sweep_out_err";
  fs::remove_all(dir);
  RunConfig cfg = tiny_sweep_cfg();
  cfg.sweep.lambdas = {0.0};
  cfg.sweep.modes = {"exact"};
  cfg.grid.tau_max_factor = 1.2;  // tau grid too short for the side-peak window
  const SweepOutcome out = run_sweep(cfg, dir, 1, false);
  CHECK_FALSE(out.all_ok);
  REQUIRE(out.rows.size() == 1);
  CHECK_FALSE(out.rows[0].error.empty());
  CHECK(out.rows[0].error.find("tau grid") != std::string::npos);

  // the written csv still parses as 13 cells per line
  const std::vector<std::string> ls = lines_of(read_text_file(out.results_path));
  REQUIRE(ls.size() == 2);
  CHECK(count_char(ls[1], ',') == 12);
  fs::remove_all(dir);
}

TEST_CASE("worker count never changes the written bytes") {
  RunConfig cfg = tiny_sweep_cfg();
  cfg.sweep.temperatures_K = {4.0, 10.0};
  cfg.sweep.lambdas = {0.0};
  fs::remove_all("sweep_w1");
  fs::remove_all("sweep_w2");
  const SweepOutcome a = run_sweep(cfg, "sweep_w1", 1, false);
  const SweepOutcome b = run_sweep(cfg, "sweep_w2", 2, false);
  CHECK(a.all_ok);
  CHECK(b.all_ok);
  CHECK(read_text_file(a.results_path) == read_text_file(b.results_path));
  fs::remove_all("sweep_w1");
  fs::remove_all("sweep_w2");
}

TEST_CASE("single point helper runs one cell without writing") {
  RunConfig cfg = tiny_sweep_cfg();
  cfg.sweep.modes = {"exact", "pme"};
  const SweepOutcome out = run_single_point(cfg, 4.0, 0.0, "");
  CHECK(out.all_ok);
  REQUIRE(out.rows.size() == 2);
  CHECK(out.rows[0].mode == "exact");
  CHECK(out.rows[1].mode == "pme");
  CHECK(out.results_path.empty());
}

TEST_CASE("convergence report tabulates every rung with deltas") {
  RunConfig cfg = small_cfg(0.0, 4.0);
  const std::vector<ConvergenceRung> ladder = {{0.5, 7, 8}, {0.5, 7, 4}};
  const std::string rep = convergence_report(cfg, ladder);
  CHECK(rep.find("dt") != std::string::npos);
  CHECK(rep.find("0.5") != std::string::npos);
  CHECK(rep.find("delta") != std::string::npos);
  CHECK(count_char(rep, '\n') >= 4);
}

TEST_SUITE_END();
