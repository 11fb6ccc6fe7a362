#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qdemit {

// Deformation-coupled acoustic phonon bath of a spherically confined exciton.
// Coupling strength is the dimensionless scale `lambda`; all material fields
// are in SI-flavored units and converted on demand.
struct BathParams {
  double lambda = 1.0;
  double temperature_K = 4.0;
  double radius_nm = 3.0;          // shared electron/hole confinement radius
  double de_eV = 7.0;              // electron deformation potential
  double dh_eV = -3.5;             // hole deformation potential
  double density_kg_m3 = 5370.0;
  double sound_velocity_m_s = 5110.0;

  // lambda-independent prefactor of the super-ohmic spectral density, ps^2
  double prefactor_ps2() const;
  // Gaussian form-factor parameter 2 (v_s / a)^2, 1/ps^2
  double wsq_ps2() const;
  // cutoff frequency sqrt(wsq), 1/ps
  double omega_c_ps() const;
};

struct ExcitonParams {
  double gamma_ps = 1e-3;   // radiative decay rate, 1/ps (1 ns lifetime)
  double detuning_ps = 0.0; // drive carrier minus polaron-shifted line, 1/ps
};

// Periodic train of Gaussian pulses, each truncated at +-truncation_sigmas.
struct PulseParams {
  double area_rad = 3.14159265358979323846;
  double fwhm_ps = 3.0;
  double period_ps = 12800.0;
  int count = 3;
  double t0_ps = 25.0;     // center of the first pulse
  double truncation_sigmas = 8.0;

  double sigma_ps() const;
};

struct GridParams {
  double dt_ps = 0.5;
  int n_c = 7;              // memory depth in time steps
  int stride = 4;           // emission-time node spacing for two-time grids
  double tau_max_factor = 1.5;  // tau grid extends to factor * period
};

struct EngineParams {
  // "continuum": closed-form bath kernels on drive-free stretches,
  //   full tensor propagation only inside pulse windows.
  // "discrete": step-product kernels, kept for cross-validation.
  std::string kernel_mode = "continuum";
  double memory_cap_gib = 2.0;
  bool validate_invariants = true;
  int quad_nodes = 6000;    // frequency-grid size for bath integrals
  int pme_substeps = 32;    // integrator substeps per dt cell inside pulses
};

// Bloch-sphere pair sampling for the trace-distance non-Markovianity measure.
struct BlpParams {
  bool include_drive = false;  // measure defaults to the undriven map
  int pairs = 32;
};

struct OutputParams {
  bool dump_grids = false;
  int dump_stride = 32;     // decimation of two-time grid dumps
};

struct SweepParams {
  std::vector<double> temperatures_K{4.0, 10.0, 20.0, 30.0, 50.0, 70.0};
  std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<std::string> modes{"exact", "qrt", "pme"};
};

struct RunConfig {
  BathParams bath;
  ExcitonParams system;
  PulseParams pulses;
  GridParams grid;
  EngineParams engine;
  BlpParams blp;
  OutputParams output;
  SweepParams sweep;

  // throws std::invalid_argument naming the offending field
  void validate() const;

  // presets: "desk" (dt=0.5, n_c=7, stride=4), "accuracy" (dt=0.25, n_c=12)
  void apply_preset(const std::string& name);

  // JSON round trip; dotted paths like "bath.lambda" address single fields
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
  std::string to_json_text() const;
  void set_field(const std::string& dotted_path, const std::string& value);

  // stable content hash of the physics-relevant fields
  std::uint64_t config_hash() const;
  // hash of the material fields only, used as part of bath-table cache keys
  std::uint64_t material_hash() const;

  double horizon_ps() const;   // t0 + count * period
};

}  // namespace qdemit
