#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "qdemit/config.hpp"
#include "qdemit/io.hpp"
#include "qdemit/model.hpp"

#include "test_support.hpp"

using namespace qdemit;
using qdemit::testing::small_cfg;

namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io");

TEST_CASE("fmt_g round-trips doubles compactly") {
  CHECK(fmt_g(0.5) == "0.5");
  CHECK(fmt_g(-3.0) == "-3");
  CHECK(fmt_g(0.0) == "0");
  // 12 significant digits keep figure-of-merit columns diff-stable
  CHECK(fmt_g(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("fnv1a is order-sensitive and seed-chainable") {
  const char a[] = "ab", b[] = "ba";
  CHECK(fnv1a(a, 2) != fnv1a(b, 2));
  const std::uint64_t h1 = fnv1a(a, 1);
  CHECK(fnv1a(a + 1, 1, h1) == fnv1a(a, 2));
}

TEST_CASE("influence tables cache to disk and reject stale keys") {
  const std::string dir = "io_test_cache";
  fs::remove_all(dir);
  ensure_directory(dir);
  const RunConfig cfg = small_cfg(1.0, 4.0);
  const BathTables tables(cfg.bath, cfg.engine.quad_nodes);
  const EtaTable eta = compute_eta_table(tables, cfg.grid.dt_ps, cfg.grid.n_c);
  const EtaCacheKey key{cfg.grid.dt_ps, cfg.grid.n_c, cfg.bath.lambda,
                        cfg.bath.temperature_K, cfg.material_hash()};

  const std::string path = eta_cache_path(dir, key);
  EtaTable back;
  CHECK_FALSE(load_eta_table(path, key, &back));
  store_eta_table(path, key, eta);
  REQUIRE(load_eta_table(path, key, &back));
  CHECK(back.dt == eta.dt);
  CHECK(back.n_c == eta.n_c);
  CHECK(back.diag == eta.diag);  // bitwise equality survives the round trip
  REQUIRE(back.off.size() == eta.off.size());
  for (size_t i = 0; i < eta.off.size(); ++i) CHECK(back.off[i] == eta.off[i]);

  EtaCacheKey other = key;
  other.temperature_K = 5.0;
  CHECK_FALSE(load_eta_table(path, other, &back));
  CHECK(eta_cache_path(dir, other) != path);
  fs::remove_all(dir);
}

TEST_CASE("tensor snapshots resume only under the same configuration") {
  const std::string dir = "io_test_snap";
  fs::remove_all(dir);
  ensure_directory(dir);
  AdmTensor a = AdmTensor::from_state(Vec4(cplx(0.5), cplx(0.1, 0.2), cplx(0.1, -0.2), cplx(0.5)));
  const std::string path = dir + "/snap.bin";
  save_adm_snapshot(path, 42u, 17, a);

  AdmTensor out;
  int step = 0;
  REQUIRE(load_adm_snapshot(path, 42u, &step, &out));
  CHECK(step == 17);
  REQUIRE(out.rank() == a.rank());
  for (size_t i = 0; i < a.size(); ++i) CHECK(out[i] == a[i]);
  CHECK_FALSE(load_adm_snapshot(path, 43u, &step, &out));
  CHECK_FALSE(load_adm_snapshot(dir + "/missing.bin", 42u, &step, &out));
  fs::remove_all(dir);
}

TEST_CASE("text files write atomically and read back verbatim") {
  const std::string dir = "io_test_text";
  fs::remove_all(dir);
  ensure_directory(dir);
  const std::string body = "alpha,beta\n1,2\n";
  write_text_file(dir + "/t.csv", body);
  CHECK(read_text_file(dir + "/t.csv") == body);
  CHECK_THROWS_AS(read_text_file(dir + "/nope.csv"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("cache directory honors the environment override") {
  setenv("QDSIM_CACHE_DIR", "my_cache_root", 1);
  CHECK(cache_directory() == "my_cache_root");
  unsetenv("QDSIM_CACHE_DIR");
  CHECK(cache_directory() == "qdsim_cache");
}

TEST_CASE("config json round-trips and rejects unknown fields") {
  RunConfig cfg = small_cfg(2.0, 30.0);
  cfg.grid.stride = 8;
  const RunConfig back = RunConfig::from_json_text(cfg.to_json_text());
  CHECK(back.bath.lambda == cfg.bath.lambda);
  CHECK(back.bath.temperature_K == cfg.bath.temperature_K);
  CHECK(back.grid.stride == cfg.grid.stride);
  CHECK(back.config_hash() == cfg.config_hash());

  CHECK_THROWS_AS(RunConfig::from_json_text("{\"bogus\": 1}"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), std::exception);
}

TEST_CASE("dotted field overrides reach nested sections") {
  RunConfig cfg = small_cfg(1.0, 4.0);
  cfg.set_field("bath.lambda", "2.5");
  CHECK(cfg.bath.lambda == 2.5);
  cfg.set_field("grid.n_c", "9");
  CHECK(cfg.grid.n_c == 9);
  cfg.set_field("engine.kernel_mode", "discrete");
  CHECK(cfg.engine.kernel_mode == "discrete");
  cfg.set_field("blp.include_drive", "true");
  CHECK(cfg.blp.include_drive);
  CHECK_THROWS_AS(cfg.set_field("bath.unknown", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set_field("nodots", "1"), std::invalid_argument);
}

TEST_CASE("hashes track physics, not output settings") {
  RunConfig a = small_cfg(1.0, 4.0);
  RunConfig b = a;
  b.output.dump_grids = true;
  b.output.dump_stride = 7;
  CHECK(a.config_hash() == b.config_hash());
  b.bath.lambda = 1.5;
  CHECK(a.config_hash() != b.config_hash());
  // the material hash keys cached influence tables together with the
  // explicit (lambda, T) fields, so it tracks only the material constants
  CHECK(a.material_hash() == b.material_hash());
  b.bath.radius_nm *= 1.01;
  CHECK(a.material_hash() != b.material_hash());

  RunConfig c = small_cfg(1.0, 4.0);
  c.grid.dt_ps = 0.25;
  CHECK(a.material_hash() == c.material_hash());
  CHECK(a.config_hash() != c.config_hash());
}

TEST_CASE("presets pin the two documented grids") {
  RunConfig cfg;
  cfg.apply_preset("desk");
  CHECK(cfg.grid.dt_ps == 0.5);
  CHECK(cfg.grid.n_c == 7);
  CHECK(cfg.grid.stride == 4);
  cfg.apply_preset("accuracy");
  CHECK(cfg.grid.dt_ps == 0.25);
  CHECK(cfg.grid.n_c == 12);
  CHECK_THROWS_AS(cfg.apply_preset("bogus"), std::invalid_argument);
}

TEST_SUITE_END();
