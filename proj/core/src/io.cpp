#include "qdemit/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qdemit {

namespace {

constexpr char kEtaMagic[4] = {'Q', 'E', 'T', 'A'};
constexpr char kAdmMagic[4] = {'Q', 'A', 'D', 'M'};
constexpr std::uint32_t kEtaVersion = 1;
constexpr std::uint32_t kAdmVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T* v) {
  is.read(reinterpret_cast<char*>(v), sizeof(T));
  return static_cast<bool>(is);
}

}  // namespace

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_directory() {
  if (const char* env = std::getenv("QDSIM_CACHE_DIR"); env && *env) return env;
  return "qdsim_cache";
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

std::string eta_cache_path(const std::string& dir, const EtaCacheKey& key) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "eta_%016llx_%016llx_%016llx_%d_%016llx.bin",
                static_cast<unsigned long long>(fnv1a(&key.dt, sizeof(double))),
                static_cast<unsigned long long>(fnv1a(&key.lambda, sizeof(double))),
                static_cast<unsigned long long>(fnv1a(&key.temperature_K, sizeof(double))),
                key.n_c, static_cast<unsigned long long>(key.material_hash));
  return dir + "/" + buf;
}

bool load_eta_table(const std::string& path, const EtaCacheKey& key, EtaTable* out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kEtaMagic, 4) != 0) return false;
  std::uint32_t version = 0;
  if (!get(is, &version) || version != kEtaVersion) return false;
  EtaCacheKey k{};
  if (!get(is, &k.dt) || !get(is, &k.n_c) || !get(is, &k.lambda) ||
      !get(is, &k.temperature_K) || !get(is, &k.material_hash))
    return false;
  if (k.dt != key.dt || k.n_c != key.n_c || k.lambda != key.lambda ||
      k.temperature_K != key.temperature_K || k.material_hash != key.material_hash)
    return false;
  std::uint32_t count = 0;
  if (!get(is, &count) || count != static_cast<std::uint32_t>(k.n_c)) return false;
  EtaTable eta;
  eta.dt = k.dt;
  eta.n_c = k.n_c;
  if (!get(is, &eta.diag)) return false;
  eta.off.resize(count);
  for (auto& v : eta.off)
    if (!get(is, &v)) return false;
  *out = std::move(eta);
  return true;
}

void store_eta_table(const std::string& path, const EtaCacheKey& key, const EtaTable& eta) {
  if (eta.n_c != key.n_c || eta.dt != key.dt)
    throw std::invalid_argument("influence table does not match its cache key");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp);
    os.write(kEtaMagic, 4);
    put(os, kEtaVersion);
    put(os, key.dt);
    put(os, key.n_c);
    put(os, key.lambda);
    put(os, key.temperature_K);
    put(os, key.material_hash);
    put(os, static_cast<std::uint32_t>(eta.off.size()));
    put(os, eta.diag);
    for (const auto& v : eta.off) put(os, v);
    if (!os) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void save_adm_snapshot(const std::string& path, std::uint64_t config_hash, int step,
                       const AdmTensor& a) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp);
    os.write(kAdmMagic, 4);
    put(os, kAdmVersion);
    put(os, config_hash);
    put(os, step);
    put(os, a.rank());
    put(os, static_cast<std::uint64_t>(a.size()));
    os.write(reinterpret_cast<const char*>(a.data()),
             static_cast<std::streamsize>(a.size() * sizeof(cplx)));
    if (!os) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

bool load_adm_snapshot(const std::string& path, std::uint64_t config_hash, int* step,
                       AdmTensor* out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kAdmMagic, 4) != 0) return false;
  std::uint32_t version = 0;
  if (!get(is, &version) || version != kAdmVersion) return false;
  std::uint64_t hash = 0;
  if (!get(is, &hash) || hash != config_hash) return false;
  int st = 0, rank = 0;
  std::uint64_t count = 0;
  if (!get(is, &st) || !get(is, &rank) || !get(is, &count)) return false;
  if (rank < 1 || count != (1ull << (2 * rank))) return false;
  AdmTensor a(rank);
  is.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(a.size() * sizeof(cplx)));
  if (!is) return false;
  *step = st;
  *out = std::move(a);
  return true;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp);
    os << content;
    if (!os) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace qdemit
