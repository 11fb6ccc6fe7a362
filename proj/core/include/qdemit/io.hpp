#pragma once

#include <cstdint>
#include <string>

#include "qdemit/adm.hpp"
#include "qdemit/influence.hpp"

namespace qdemit {

// shortest round-trip-stable decimal, deterministic across runs
std::string fmt_g(double v);

std::uint64_t fnv1a(const void* data, std::size_t n,
                    std::uint64_t seed = 14695981039346656037ull);

// cache root: $QDSIM_CACHE_DIR when set, else ./qdsim_cache
std::string cache_directory();

// influence tables are keyed by the grid and the bath point; the material
// hash folds in every field the table depends on
struct EtaCacheKey {
  double dt = 0.0;
  int n_c = 0;
  double lambda = 0.0;
  double temperature_K = 0.0;
  std::uint64_t material_hash = 0;
};

std::string eta_cache_path(const std::string& dir, const EtaCacheKey& key);
// false on missing file, wrong version, or key mismatch
bool load_eta_table(const std::string& path, const EtaCacheKey& key, EtaTable* out);
void store_eta_table(const std::string& path, const EtaCacheKey& key, const EtaTable& eta);

// mid-run snapshot of the augmented tensor, resumable only under the same
// physics configuration
void save_adm_snapshot(const std::string& path, std::uint64_t config_hash, int step,
                       const AdmTensor& a);
bool load_adm_snapshot(const std::string& path, std::uint64_t config_hash, int* step,
                       AdmTensor* out);

// write-then-rename so readers never observe a partial file
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void ensure_directory(const std::string& path);

}  // namespace qdemit
