#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "qdemit/correlators.hpp"
#include "qdemit/io.hpp"

#include "test_support.hpp"

using namespace qdemit;
using qdemit::testing::small_cfg;

TEST_SUITE_BEGIN("correlators");

TEST_CASE("emission nodes span half a period to one and a half periods") {
  const RunConfig cfg = small_cfg(1.0, 4.0);
  const std::vector<int> nodes = emission_nodes(cfg);
  CHECK(nodes.front() == 450);
  CHECK(nodes.back() <= 1250);
  CHECK(nodes[1] - nodes[0] == cfg.grid.stride);
  CHECK(tau_points(cfg) == 1201);
}

TEST_CASE("constant synthetic curves give closed-form figures") {
  const RunConfig cfg = small_cfg(0.0, 4.0);
  const int nsteps = static_cast<int>(std::lround(cfg.horizon_ps() / cfg.grid.dt_ps));
  const int ntau = tau_points(cfg);
  const std::vector<double> occ(static_cast<size_t>(nsteps) + 1, 0.5);
  auto fill = [&](int, std::vector<cplx>& g1, std::vector<cplx>& g2) {
    g1.assign(static_cast<size_t>(ntau), cplx(0.5));
    g2.assign(static_cast<size_t>(ntau), cplx(0.25));
  };
  const PointCurves pc = assemble_curves(cfg, occ, fill);

  for (int j = 0; j < ntau; j += 97) {
    CHECK(pc.avg_g2[static_cast<size_t>(j)] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pc.avg_hom[static_cast<size_t>(j)] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(std::abs(pc.avg_g1[static_cast<size_t>(j)] - cplx(0.5)) < 1e-12);
  }
  // a flat coincidence histogram has equal peak and side-peak areas
  CHECK(std::abs(pc.purity) < 1e-12);
  CHECK(std::abs(pc.indistinguishability) < 1e-12);
  // quarter-period emission integral of a half-filled emitter
  const double b_expect = cfg.system.gamma_ps * 0.5 *
                          ((cfg.pulses.t0_ps + cfg.pulses.period_ps / 2.0));
  CHECK(pc.brightness == doctest::Approx(b_expect).epsilon(1e-12));
  CHECK(pc.cs_excess == doctest::Approx(0.0));
  CHECK(pc.occ_after_pulse == doctest::Approx(0.5));
  CHECK(pc.g2_min == doctest::Approx(0.25));
  CHECK(pc.hom_min == doctest::Approx(0.125));
}

TEST_CASE("end nodes carry half weight in the average") {
  RunConfig cfg = small_cfg(0.0, 4.0);
  cfg.grid.stride = 400;  // exactly three emission nodes
  cfg.validate();
  REQUIRE(emission_nodes(cfg).size() == 3);
  const int nsteps = static_cast<int>(std::lround(cfg.horizon_ps() / cfg.grid.dt_ps));
  const int ntau = tau_points(cfg);
  const std::vector<double> occ(static_cast<size_t>(nsteps) + 1, 0.0);
  auto fill = [&](int i_t, std::vector<cplx>& g1, std::vector<cplx>& g2) {
    g1.assign(static_cast<size_t>(ntau), cplx(0.0));
    const double v = i_t == 450 ? 0.3 : (i_t == 850 ? 0.1 : 0.7);
    g2.assign(static_cast<size_t>(ntau), cplx(v));
  };
  const PointCurves pc = assemble_curves(cfg, occ, fill);
  // (0.5*0.3 + 1.0*0.1 + 0.5*0.7) / 2, not the flat mean 0.3667
  CHECK(pc.avg_g2[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("fewer than three pulse periods is refused") {
  RunConfig cfg = small_cfg(0.0, 4.0);
  cfg.pulses.count = 2;
  CHECK_THROWS_AS(run_point(cfg, {"exact"}), std::invalid_argument);
}

TEST_CASE("unknown propagation modes are refused") {
  const RunConfig cfg = small_cfg(0.0, 4.0);
  CHECK_THROWS_AS(run_point(cfg, {"magic"}), std::invalid_argument);
}

TEST_CASE("all three modes produce physical figures") {
  const RunConfig cfg = small_cfg(1.0, 4.0);
  PointOptions opt;
  opt.with_blp = false;
  const PointResult pr = run_point(cfg, {"exact", "qrt", "pme"}, opt);
  REQUIRE(pr.modes.size() == 3);
  CHECK_FALSE(pr.n_computed);

  for (const auto& [mode, pc] : pr.modes) {
    INFO("mode ", mode);
    // simultaneous double emission is impossible for a two-level emitter
    CHECK(std::abs(pc.avg_g2[0]) < 1e-10);
    CHECK(std::abs(pc.avg_hom[0]) < 1e-10);
    CHECK(pc.avg_g1[0].real() > 0.0);
    // the short test train leaves residual excitation between pulses, so the
    // window figures sit far below their long-period values
    CHECK(pc.purity > 0.4);
    CHECK(pc.purity <= 1.0 + 1e-9);
    CHECK(pc.indistinguishability > 0.45);
    CHECK(pc.indistinguishability <= 1.0 + 1e-9);
    CHECK(pc.brightness > 0.1);
    CHECK(pc.brightness < 1.0);
    CHECK(pc.occ_after_pulse > 0.7);
    CHECK(pc.cs_excess < 1e-9);
  }
  const double i_exact = pr.modes.at("exact").indistinguishability;
  const double i_qrt = pr.modes.at("qrt").indistinguishability;
  CHECK(i_qrt <= i_exact + 3e-3);
  CHECK(pr.modes.at("exact").stats.steps > 0);
}

TEST_CASE("zero coupling reports a vanishing divisibility measure") {
  const RunConfig cfg = small_cfg(0.0, 4.0);
  const PointResult pr = run_point(cfg, {"exact"});
  REQUIRE(pr.n_computed);
  CHECK(std::abs(pr.n_measure) < 1e-8);
}

TEST_CASE("grid dumps land on disk with a metadata sidecar") {
  namespace fs = std::filesystem;
  const std::string dir = "corr_dump_test";
  fs::remove_all(dir);
  RunConfig cfg = small_cfg(0.0, 4.0);
  PointOptions opt;
  opt.with_blp = false;
  opt.dump_dir = dir;
  run_point(cfg, {"exact"}, opt);
  CHECK(fs::exists(dir + "/grid_exact.csv"));
  CHECK(fs::file_size(dir + "/grid_exact.csv") > 100);
  REQUIRE(fs::exists(dir + "/grid_meta.json"));
  const std::string meta = read_text_file(dir + "/grid_meta.json");
  CHECK(meta.find("tau_points") != std::string::npos);
  CHECK(meta.find("config_hash") != std::string::npos);
  fs::remove_all(dir);
}

TEST_SUITE_END();
