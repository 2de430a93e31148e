#include "dcg/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dcg/master.hpp"

namespace dcg {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

std::vector<Entry> tokenize_document(const std::string& text) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    Entry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<double> parse_reals(const Entry& e, std::size_t want_min,
                                std::size_t want_max) {
  std::istringstream in(e.value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      throw std::invalid_argument("config line " + std::to_string(e.line) +
                                  ": field '" + e.key +
                                  "' has a malformed number '" + tok + "'");
    out.push_back(v);
  }
  if (out.size() < want_min || out.size() > want_max)
    throw std::invalid_argument("config line " + std::to_string(e.line) +
                                ": field '" + e.key + "' expects between " +
                                std::to_string(want_min) + " and " +
                                std::to_string(want_max) + " numbers");
  return out;
}

double parse_real(const Entry& e) { return parse_reals(e, 1, 1)[0]; }

long long parse_integer(const Entry& e) {
  const double v = parse_real(e);
  const long long n = std::llround(v);
  if (std::abs(v - n) > 0.0)
    throw std::invalid_argument("config line " + std::to_string(e.line) +
                                ": field '" + e.key + "' must be an integer");
  return n;
}

std::uint64_t parse_seed(const Entry& e) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(e.value, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != e.value.size())
    throw std::invalid_argument("config line " + std::to_string(e.line) +
                                ": field '" + e.key +
                                "' must be an unsigned integer");
  return v;
}

void apply_entry(SimConfig& cfg, const Entry& e,
                 bool& has_mode, bool& has_j, bool& has_gamma,
                 bool& has_hamiltonian) {
  if (e.key == "mode") {
    cfg.mode = run_mode_from_string(e.value);
    has_mode = true;
  } else if (e.key == "j") {
    cfg.j = parse_real(e);
    has_j = true;
  } else if (e.key == "gamma") {
    cfg.gamma = parse_real(e);
    has_gamma = true;
  } else if (e.key == "h_linear") {
    const std::vector<double> v = parse_reals(e, 3, 3);
    cfg.hamiltonian.linear = {v[0], v[1], v[2]};
    has_hamiltonian = true;
  } else if (e.key == "h_quad") {
    const std::vector<double> v = parse_reals(e, 9, 9);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) cfg.hamiltonian.quadratic[i][k] = v[3 * i + k];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        if (cfg.hamiltonian.quadratic[i][k] != cfg.hamiltonian.quadratic[k][i])
          throw std::invalid_argument("config line " + std::to_string(e.line) +
                                      ": field 'h_quad' must be symmetric");
    has_hamiltonian = true;
  } else if (e.key == "h_quad_diag") {
    const std::vector<double> v = parse_reals(e, 3, 3);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        cfg.hamiltonian.quadratic[i][k] = (i == k) ? v[i] : 0.0;
    has_hamiltonian = true;
  } else if (e.key == "dt") {
    cfg.dt = parse_real(e);
  } else if (e.key == "t_final") {
    cfg.t_final = parse_real(e);
  } else if (e.key == "sample_stride") {
    cfg.sample_stride = static_cast<int>(parse_integer(e));
  } else if (e.key == "n_traj") {
    cfg.n_traj = parse_integer(e);
  } else if (e.key == "master_seed") {
    cfg.master_seed = parse_seed(e);
  } else if (e.key == "initial_tau") {
    const std::vector<double> v = parse_reals(e, 1, 2);
    cfg.initial_tau = cplx(v[0], v.size() > 1 ? v[1] : 0.0);
  } else if (e.key == "noise_variance_scale") {
    cfg.noise_variance_scale = parse_real(e);
  } else if (e.key == "bec_atoms") {
    cfg.bec_atoms = parse_integer(e);
  } else if (e.key == "bec_modes") {
    cfg.bec_modes = static_cast<int>(parse_integer(e));
  } else if (e.key == "local_levels") {
    cfg.local_levels = static_cast<int>(parse_integer(e));
  } else if (e.key == "omegas") {
    cfg.omegas = parse_reals(e, 1, 64);
  } else {
    throw std::invalid_argument("config line " + std::to_string(e.line) +
                                ": unknown key '" + e.key + "'");
  }
}

std::vector<SimConfig> parse_document(const std::string& text,
                                      bool allow_multi) {
  const std::vector<Entry> entries = tokenize_document(text);

  std::string preset;
  int preset_line = 0;
  for (const Entry& e : entries) {
    if (e.key != "preset") continue;
    if (!preset.empty())
      throw std::invalid_argument("config line " + std::to_string(e.line) +
                                  ": duplicate preset key");
    preset = e.value;
    preset_line = e.line;
  }

  std::vector<SimConfig> plan;
  bool has_mode = false, has_j = false, has_gamma = false;
  bool has_hamiltonian = false;
  if (!preset.empty()) {
    if (!is_preset(preset))
      throw std::invalid_argument("config line " + std::to_string(preset_line) +
                                  ": unknown preset '" + preset + "'");
    plan = preset_plan(preset);
    if (!allow_multi && plan.size() > 1)
      throw std::invalid_argument(
          "preset '" + preset +
          "' expands to multiple runs; parse it as a plan");
    has_mode = has_j = has_gamma = has_hamiltonian = true;
  } else {
    plan.emplace_back();
  }

  for (const Entry& e : entries) {
    if (e.key == "preset") continue;
    for (SimConfig& cfg : plan)
      apply_entry(cfg, e, has_mode, has_j, has_gamma, has_hamiltonian);
  }

  std::vector<std::string> missing;
  if (!has_mode) missing.push_back("mode");
  if (!has_j) missing.push_back("j");
  if (!has_gamma) missing.push_back("gamma");
  if (!missing.empty()) {
    std::string msg = "config is missing required keys:";
    for (const std::string& k : missing) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  for (const SimConfig& cfg : plan) {
    if ((cfg.mode == RunMode::exact || cfg.mode == RunMode::stochastic ||
         cfg.mode == RunMode::compare) &&
        !has_hamiltonian)
      throw std::invalid_argument(
          "config is missing required keys: h_linear or h_quad");
    if (cfg.mode == RunMode::timescales && cfg.omegas.empty() &&
        cfg.omega_scale() == 0.0)
      throw std::invalid_argument(
          "config is missing required keys: omegas or h_linear");
    validate_config(cfg);
  }
  return plan;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::exact: return "exact";
    case RunMode::stochastic: return "stochastic";
    case RunMode::compare: return "compare";
    case RunMode::classicality: return "classicality";
    case RunMode::timescales: return "timescales";
  }
  return "exact";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "exact") return RunMode::exact;
  if (s == "stochastic") return RunMode::stochastic;
  if (s == "compare") return RunMode::compare;
  if (s == "classicality") return RunMode::classicality;
  if (s == "timescales") return RunMode::timescales;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

double SimConfig::omega_scale() const {
  const auto& a = hamiltonian.linear;
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

double SimConfig::resolved_dt() const {
  return dt > 0.0 ? dt : default_dt(omega_scale(), gamma, j);
}

SimConfig parse_config(const std::string& text) {
  return parse_document(text, false).front();
}

std::vector<SimConfig> parse_plan(const std::string& text) {
  return parse_document(text, true);
}

bool is_preset(const std::string& name) {
  return name == "fig1" || name == "fig2" || name == "linear" ||
         name == "classicality";
}

SimConfig preset_config(const std::string& name) {
  SimConfig cfg;
  if (name == "fig1") {
    // Driven two-mode condensate of N = 128 atoms: H = -omega Jx + U Jz^2
    // with omega = 15, U = omega / N, weak isotropic coupling. The
    // trajectory weak error grows with j * dt, so the default step is too
    // coarse at j = 64: dt = 5e-4 with 0.05-spaced samples keeps the
    // n = 64 ensemble inside the comparison band.
    cfg.mode = RunMode::compare;
    cfg.j = 64.0;
    cfg.gamma = 0.05 / 64.0;
    cfg.hamiltonian.linear = {-15.0, 0.0, 0.0};
    cfg.hamiltonian.quadratic[2][2] = 15.0 / 128.0;
    cfg.dt = 5e-4;
    cfg.sample_stride = 100;
    cfg.n_traj = 64;
    cfg.master_seed = 2;
  } else if (name == "linear") {
    // Pure rotation-plus-decay case with a closed-form first-moment check.
    cfg.mode = RunMode::exact;
    cfg.j = 8.0;
    cfg.gamma = 0.01;
    cfg.hamiltonian.linear = {-15.0, 0.0, 0.0};
    cfg.t_final = 2.0;
    cfg.master_seed = 20260822ULL;
  } else if (name == "classicality") {
    cfg.mode = RunMode::classicality;
    cfg.j = 64.0;
    cfg.gamma = 0.05 / 64.0;
    cfg.hamiltonian.linear = {-15.0, 0.0, 0.0};
    cfg.bec_atoms = 128;
    cfg.bec_modes = 2;
    cfg.local_levels = 2;
    cfg.omegas = {15.0};
    cfg.master_seed = 20260822ULL;
  } else {
    throw std::invalid_argument("unknown single-run preset '" + name + "'");
  }
  return cfg;
}

std::vector<SimConfig> preset_plan(const std::string& name) {
  if (name != "fig2") return {preset_config(name)};
  std::vector<SimConfig> plan;
  const std::uint64_t base = 20260822ULL;
  for (int two_j : {4, 8, 16, 32, 64, 128, 256}) {
    SimConfig cfg;
    cfg.mode = RunMode::stochastic;
    cfg.j = two_j / 2.0;
    cfg.gamma = 0.05 / cfg.j;
    cfg.hamiltonian.linear = {-15.0, 0.0, 0.0};
    cfg.hamiltonian.quadratic[2][2] = 15.0 / two_j;
    cfg.n_traj = 8;
    // Decorrelate streams across the sweep: same base seed, j folded in.
    cfg.master_seed = mix64(base ^ (0x9E3779B97F4A7C15ULL * two_j));
    plan.push_back(cfg);
  }
  return plan;
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "mode = " << to_string(cfg.mode) << "\n";
  out << "j = " << format_real(cfg.j) << "\n";
  out << "gamma = " << format_real(cfg.gamma) << "\n";
  out << "h_linear = " << format_real(cfg.hamiltonian.linear[0]) << " "
      << format_real(cfg.hamiltonian.linear[1]) << " "
      << format_real(cfg.hamiltonian.linear[2]) << "\n";
  out << "h_quad =";
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      out << " " << format_real(cfg.hamiltonian.quadratic[i][k]);
  out << "\n";
  out << "dt = " << format_real(cfg.dt) << "\n";
  out << "t_final = " << format_real(cfg.t_final) << "\n";
  out << "sample_stride = " << cfg.sample_stride << "\n";
  out << "n_traj = " << cfg.n_traj << "\n";
  out << "master_seed = " << cfg.master_seed << "\n";
  out << "initial_tau = " << format_real(cfg.initial_tau.real()) << " "
      << format_real(cfg.initial_tau.imag()) << "\n";
  out << "noise_variance_scale = " << format_real(cfg.noise_variance_scale)
      << "\n";
  out << "bec_atoms = " << cfg.bec_atoms << "\n";
  out << "bec_modes = " << cfg.bec_modes << "\n";
  out << "local_levels = " << cfg.local_levels << "\n";
  if (!cfg.omegas.empty()) {
    out << "omegas =";
    for (double w : cfg.omegas) out << " " << format_real(w);
    out << "\n";
  }
  return out.str();
}

void validate_config(const SimConfig& cfg) {
  const auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
  };
  if (!(cfg.j > 0.0) || !std::isfinite(cfg.j)) fail("j", "must be positive");
  const double two_j = 2.0 * cfg.j;
  if (std::abs(two_j - std::lround(two_j)) > 1e-9)
    fail("j", "must be an integer or half-integer");
  if (cfg.gamma < 0.0 || !std::isfinite(cfg.gamma))
    fail("gamma", "must be nonnegative");
  if (cfg.dt < 0.0 || !std::isfinite(cfg.dt)) fail("dt", "must be nonnegative");
  if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final))
    fail("t_final", "must be positive");
  if (cfg.dt > 0.0 && cfg.dt > cfg.t_final) fail("dt", "must not exceed t_final");
  if (cfg.sample_stride < 1) fail("sample_stride", "must be >= 1");
  if (cfg.n_traj < 1) fail("n_traj", "must be >= 1");
  if (cfg.mode == RunMode::compare && cfg.n_traj < 2)
    fail("n_traj", "compare mode needs at least two trajectories");
  if (!std::isfinite(cfg.initial_tau.real()) ||
      !std::isfinite(cfg.initial_tau.imag()))
    fail("initial_tau", "must be finite");
  if (cfg.noise_variance_scale < 0.0 || !std::isfinite(cfg.noise_variance_scale))
    fail("noise_variance_scale", "must be nonnegative");
  if (cfg.bec_atoms < 0) fail("bec_atoms", "must be nonnegative");
  if (cfg.bec_modes < 2) fail("bec_modes", "must be >= 2");
  if (cfg.local_levels < 2) fail("local_levels", "must be >= 2");
  for (double w : cfg.omegas)
    if (!(w > 0.0) || !std::isfinite(w)) fail("omegas", "must be positive");
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(cfg.hamiltonian.linear[i]))
      fail("h_linear", "must be finite");
    for (int k = 0; k < 3; ++k) {
      if (!std::isfinite(cfg.hamiltonian.quadratic[i][k]))
        fail("h_quad", "must be finite");
      if (cfg.hamiltonian.quadratic[i][k] != cfg.hamiltonian.quadratic[k][i])
        fail("h_quad", "must be symmetric");
    }
  }
}

}
