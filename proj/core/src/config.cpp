#include "qdemit/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qdemit/units.hpp"

namespace qdemit {

namespace {

using nlohmann::json;

constexpr double kEvJ = 1.602176634e-19;
constexpr double kHbarSI = 1.054571817e-34;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

json to_json_obj(const RunConfig& c) {
  json j;
  j["bath"] = {{"lambda", c.bath.lambda},
               {"temperature_K", c.bath.temperature_K},
               {"radius_nm", c.bath.radius_nm},
               {"de_eV", c.bath.de_eV},
               {"dh_eV", c.bath.dh_eV},
               {"density_kg_m3", c.bath.density_kg_m3},
               {"sound_velocity_m_s", c.bath.sound_velocity_m_s}};
  j["system"] = {{"gamma_ps", c.system.gamma_ps}, {"detuning_ps", c.system.detuning_ps}};
  j["pulses"] = {{"area_rad", c.pulses.area_rad},
                 {"fwhm_ps", c.pulses.fwhm_ps},
                 {"period_ps", c.pulses.period_ps},
                 {"count", c.pulses.count},
                 {"t0_ps", c.pulses.t0_ps},
                 {"truncation_sigmas", c.pulses.truncation_sigmas}};
  j["grid"] = {{"dt_ps", c.grid.dt_ps},
               {"n_c", c.grid.n_c},
               {"stride", c.grid.stride},
               {"tau_max_factor", c.grid.tau_max_factor}};
  j["engine"] = {{"kernel_mode", c.engine.kernel_mode},
                 {"memory_cap_gib", c.engine.memory_cap_gib},
                 {"validate_invariants", c.engine.validate_invariants},
                 {"quad_nodes", c.engine.quad_nodes},
                 {"pme_substeps", c.engine.pme_substeps}};
  j["blp"] = {{"include_drive", c.blp.include_drive}, {"pairs", c.blp.pairs}};
  j["output"] = {{"dump_grids", c.output.dump_grids}, {"dump_stride", c.output.dump_stride}};
  j["sweep"] = {{"temperatures_K", c.sweep.temperatures_K},
                {"lambdas", c.sweep.lambdas},
                {"modes", c.sweep.modes}};
  return j;
}

// unknown keys are rejected so typos cannot silently fall back to defaults
void merge_checked(const json& patch, const json& base, json& out, const std::string& prefix) {
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw std::invalid_argument("unknown config field: " + path);
    if (it->is_object()) {
      merge_checked(*it, base.at(it.key()), out.at(it.key()), path);
    } else {
      out.at(it.key()) = *it;
    }
  }
}

RunConfig from_json_obj(const json& j) {
  RunConfig c;
  json full = to_json_obj(c);
  merge_checked(j, json(full), full, "");
  const json& b = full.at("bath");
  c.bath.lambda = b.at("lambda");
  c.bath.temperature_K = b.at("temperature_K");
  c.bath.radius_nm = b.at("radius_nm");
  c.bath.de_eV = b.at("de_eV");
  c.bath.dh_eV = b.at("dh_eV");
  c.bath.density_kg_m3 = b.at("density_kg_m3");
  c.bath.sound_velocity_m_s = b.at("sound_velocity_m_s");
  const json& s = full.at("system");
  c.system.gamma_ps = s.at("gamma_ps");
  c.system.detuning_ps = s.at("detuning_ps");
  const json& p = full.at("pulses");
  c.pulses.area_rad = p.at("area_rad");
  c.pulses.fwhm_ps = p.at("fwhm_ps");
  c.pulses.period_ps = p.at("period_ps");
  c.pulses.count = p.at("count");
  c.pulses.t0_ps = p.at("t0_ps");
  c.pulses.truncation_sigmas = p.at("truncation_sigmas");
  const json& g = full.at("grid");
  c.grid.dt_ps = g.at("dt_ps");
  c.grid.n_c = g.at("n_c");
  c.grid.stride = g.at("stride");
  c.grid.tau_max_factor = g.at("tau_max_factor");
  const json& e = full.at("engine");
  c.engine.kernel_mode = e.at("kernel_mode");
  c.engine.memory_cap_gib = e.at("memory_cap_gib");
  c.engine.validate_invariants = e.at("validate_invariants");
  c.engine.quad_nodes = e.at("quad_nodes");
  c.engine.pme_substeps = e.at("pme_substeps");
  const json& n = full.at("blp");
  c.blp.include_drive = n.at("include_drive");
  c.blp.pairs = n.at("pairs");
  const json& o = full.at("output");
  c.output.dump_grids = o.at("dump_grids");
  c.output.dump_stride = o.at("dump_stride");
  const json& w = full.at("sweep");
  c.sweep.temperatures_K = w.at("temperatures_K").get<std::vector<double>>();
  c.sweep.lambdas = w.at("lambdas").get<std::vector<double>>();
  c.sweep.modes = w.at("modes").get<std::vector<std::string>>();
  return c;
}

std::uint64_t fnv1a_text(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

double BathParams::prefactor_ps2() const {
  const double dd = (de_eV - dh_eV) * kEvJ;
  const double v5 = std::pow(sound_velocity_m_s, 5.0);
  const double pi2 = 4.0 * M_PI * M_PI;
  // result in s^2, scaled to ps^2
  return dd * dd / (pi2 * density_kg_m3 * kHbarSI * v5) * 1e24;
}

double BathParams::wsq_ps2() const {
  const double v_over_a = sound_velocity_m_s / (radius_nm * 1e-9) * 1e-12;  // 1/ps
  return 2.0 * v_over_a * v_over_a;
}

double BathParams::omega_c_ps() const { return std::sqrt(wsq_ps2()); }

double PulseParams::sigma_ps() const {
  return fwhm_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

void RunConfig::validate() const {
  require(bath.lambda >= 0.0, "bath.lambda must be >= 0");
  require(bath.temperature_K > 0.0, "bath.temperature_K must be > 0");
  require(bath.radius_nm > 0.0, "bath.radius_nm must be > 0");
  require(bath.density_kg_m3 > 0.0, "bath.density_kg_m3 must be > 0");
  require(bath.sound_velocity_m_s > 0.0, "bath.sound_velocity_m_s must be > 0");
  require(system.gamma_ps >= 0.0, "system.gamma_ps must be >= 0");
  require(pulses.fwhm_ps > 0.0, "pulses.fwhm_ps must be > 0");
  require(pulses.period_ps > 10.0 * pulses.fwhm_ps,
          "pulses.period_ps must exceed 10 * fwhm_ps");
  require(pulses.area_rad >= 0.0, "pulses.area_rad must be >= 0");
  require(pulses.count >= 2, "pulses.count must be >= 2");
  require(pulses.t0_ps > 0.0, "pulses.t0_ps must be > 0");
  require(pulses.truncation_sigmas > 0.0, "pulses.truncation_sigmas must be > 0");
  require(grid.dt_ps > 0.0, "grid.dt_ps must be > 0");
  require(grid.n_c >= 1, "grid.n_c must be >= 1");
  require(grid.stride >= 1, "grid.stride must be >= 1");
  require(grid.tau_max_factor > 0.0, "grid.tau_max_factor must be > 0");
  require(engine.kernel_mode == "continuum" || engine.kernel_mode == "discrete",
          "engine.kernel_mode must be 'continuum' or 'discrete'");
  require(engine.memory_cap_gib > 0.0, "engine.memory_cap_gib must be > 0");
  require(engine.quad_nodes >= 16, "engine.quad_nodes must be >= 16");
  require(engine.pme_substeps >= 1, "engine.pme_substeps must be >= 1");
  require(blp.pairs >= 1, "blp.pairs must be >= 1");
  require(output.dump_stride >= 1, "output.dump_stride must be >= 1");
  require(!sweep.modes.empty(), "sweep.modes must not be empty");
  for (const auto& m : sweep.modes) {
    require(m == "exact" || m == "qrt" || m == "pme",
            "sweep.modes entries must be 'exact', 'qrt' or 'pme'");
  }
  require(!sweep.temperatures_K.empty(), "sweep.temperatures_K must not be empty");
  require(!sweep.lambdas.empty(), "sweep.lambdas must not be empty");
}

void RunConfig::apply_preset(const std::string& name) {
  if (name == "desk") {
    grid.dt_ps = 0.5;
    grid.n_c = 7;
    grid.stride = 4;
  } else if (name == "accuracy") {
    grid.dt_ps = 0.25;
    grid.n_c = 12;
    grid.stride = 4;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  return from_json_obj(j);
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const { return to_json_obj(*this).dump(2); }

void RunConfig::set_field(const std::string& dotted_path, const std::string& value) {
  json full = to_json_obj(*this);
  json* node = &full;
  std::string rest = dotted_path;
  std::string last;
  while (true) {
    auto pos = rest.find('.');
    std::string key = rest.substr(0, pos);
    if (!node->contains(key)) throw std::invalid_argument("unknown config field: " + dotted_path);
    if (pos == std::string::npos) {
      last = key;
      break;
    }
    node = &node->at(key);
    rest = rest.substr(pos + 1);
  }
  json& slot = node->at(last);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare strings like kernel modes
  }
  if (slot.is_string() && !parsed.is_string()) parsed = value;
  slot = parsed;
  *this = from_json_obj(full);
}

std::uint64_t RunConfig::config_hash() const {
  json j = to_json_obj(*this);
  // output settings do not affect computed numbers
  j.erase("output");
  return fnv1a_text(j.dump());
}

std::uint64_t RunConfig::material_hash() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g|%.17g", bath.radius_nm,
                bath.de_eV, bath.dh_eV, bath.density_kg_m3, bath.sound_velocity_m_s);
  return fnv1a_text(buf);
}

double RunConfig::horizon_ps() const {
  return pulses.t0_ps + static_cast<double>(pulses.count) * pulses.period_ps;
}

}  // namespace qdemit
