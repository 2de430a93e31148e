// Simulation configuration: the key = value file format, presets, and
// canonical serialization.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcg/spin.hpp"

namespace dcg {

enum class RunMode { exact, stochastic, compare, classicality, timescales };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct SimConfig {
  RunMode mode = RunMode::exact;
  double j = 0.0;
  HamiltonianSpec hamiltonian;
  double gamma = 0.0;
  double dt = 0.0;  // 0 selects the default step rule
  double t_final = 10.0;
  int sample_stride = 10;
  long long n_traj = 1;
  std::uint64_t master_seed = 1;
  cplx initial_tau{0.0, 0.0};
  // Diagnostic knob: scales the noise variance relative to the drift
  // (1 = physical unraveling). Used by consistency checks.
  double noise_variance_scale = 1.0;
  // classicality-mode inputs; bec_atoms = 0 means "use 2j".
  long long bec_atoms = 0;
  int bec_modes = 2;
  int local_levels = 2;
  std::vector<double> omegas;  // empty: use |linear part| when nonzero

  double omega_scale() const;  // euclidean norm of the linear coefficients
  double resolved_dt() const;  // dt, or the default rule when dt == 0
};

// Parses one configuration document (rejects preset = fig2, which expands
// to several runs; use parse_plan for that).
SimConfig parse_config(const std::string& text);

// Like parse_config but expands multi-run presets. Single configs come
// back as a one-element plan.
std::vector<SimConfig> parse_plan(const std::string& text);

bool is_preset(const std::string& name);
SimConfig preset_config(const std::string& name);        // fig1, linear, classicality
std::vector<SimConfig> preset_plan(const std::string& name);  // + fig2

// Canonical round-trippable document.
std::string serialize_config(const SimConfig& cfg);

// Field-by-field validation; throws naming the offending field.
void validate_config(const SimConfig& cfg);

}
