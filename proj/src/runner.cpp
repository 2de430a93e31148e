#include "dcg/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "json.hpp"

#include "dcg/analysis.hpp"
#include "dcg/coherent.hpp"
#include "dcg/parallel.hpp"
#include "dcg/version.hpp"

namespace dcg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json config_json(const SimConfig& cfg) {
  json j;
  j["mode"] = to_string(cfg.mode);
  j["j"] = cfg.j;
  j["gamma"] = cfg.gamma;
  j["h_linear"] = cfg.hamiltonian.linear;
  j["h_quad"] = cfg.hamiltonian.quadratic;
  j["dt"] = cfg.dt;
  j["dt_resolved"] = cfg.resolved_dt();
  j["t_final"] = cfg.t_final;
  j["sample_stride"] = cfg.sample_stride;
  j["n_traj"] = cfg.n_traj;
  j["master_seed"] = cfg.master_seed;
  j["initial_tau"] = {cfg.initial_tau.real(), cfg.initial_tau.imag()};
  j["noise_variance_scale"] = cfg.noise_variance_scale;
  j["bec_atoms"] = cfg.bec_atoms;
  j["bec_modes"] = cfg.bec_modes;
  j["local_levels"] = cfg.local_levels;
  j["omegas"] = cfg.omegas;
  return j;
}

json unraveling_json(const UnravelingReport& rep) {
  json j;
  j["pass"] = rep.pass;
  j["n_traj"] = rep.n_traj;
  j["abs_tolerance"] = rep.abs_tolerance;
  j["sigma_tolerance"] = rep.sigma_tolerance;
  const char* names[3] = {"jx", "jy", "jz"};
  for (int i = 0; i < 3; ++i) {
    j["max_abs_dev"][names[i]] = rep.max_abs_dev[i];
    j["max_sigma_units"][names[i]] = rep.max_sigma_units[i];
  }
  j["t"] = rep.t;
  for (int i = 0; i < 3; ++i) {
    j["abs_dev"][names[i]] = rep.abs_dev[i];
    j["sigma_units"][names[i]] = rep.sigma_units[i];
  }
  return j;
}

json timescale_json(const TimescaleReport& rep) {
  json j;
  j["decoherence_time"] = rep.decoherence_time;
  j["oscillation_times"] = rep.oscillation_times;
  j["relaxation_time"] = rep.relaxation_time;
  j["link1_factor"] = rep.link1_factor;
  j["link2_factor"] = rep.link2_factor;
  j["chain_satisfied"] = rep.chain_satisfied;
  return j;
}

struct ModeOutputs {
  std::vector<std::string> files;
};

std::string suffixed(const std::string& stem, const std::string& suffix,
                     const std::string& ext) {
  return stem + suffix + ext;
}

ModeOutputs run_one(const SimConfig& cfg, const RunnerOptions& opt,
                    const std::string& suffix) {
  ModeOutputs out;
  const fs::path dir(opt.out_dir);
  const auto path = [&](const std::string& name) {
    out.files.push_back(name);
    return (dir / name).string();
  };

  switch (cfg.mode) {
    case RunMode::exact: {
      const SpinRep rep = build_spin_rep(cfg.j);
      const ComplexMatrix h = build_hamiltonian(rep, cfg.hamiltonian);
      const DensityMatrix rho0 = density_from_pure(
          coherent_amplitudes(rep, coherent_from_tau(cfg.initial_tau)));
      const TimeSeries ts =
          propagate_master(rho0, h, rep, cfg.gamma, cfg.resolved_dt(),
                           cfg.t_final, cfg.sample_stride);
      write_exact_csv(path(suffixed("exact", suffix, ".csv")), ts);
      if (opt.preset == "linear") {
        // Closed-form first moments exist for a purely linear Hamiltonian;
        // record the worst deviation as the oracle result. Passing the unit
        // initial direction keeps everything in <J_i>/j units.
        const std::array<double, 3> init = coherent_expectations(
            coherent_from_tau(cfg.initial_tau), 1.0);
        double max_dev = 0.0;
        for (std::size_t s = 0; s < ts.size(); ++s) {
          const std::array<double, 3> ref = analytic_linear_solution(
              cfg.hamiltonian.linear, cfg.gamma, init, ts.t[s]);
          max_dev = std::max({max_dev, std::abs(ts.jx[s] - ref[0]),
                              std::abs(ts.jy[s] - ref[1]),
                              std::abs(ts.jz[s] - ref[2])});
        }
        json j;
        j["max_abs_dev"] = max_dev;
        j["units"] = "angular momentum over j";
        write_json(path(suffixed("linear_check", suffix, ".json")), j);
      }
      break;
    }
    case RunMode::stochastic: {
      const EnsembleResult ens = run_ensemble(cfg, opt.emit_trajectories);
      write_ensemble_csv(path(suffixed("ensemble", suffix, ".csv")), ens);
      if (opt.emit_trajectories) {
        for (long long k = 0; k < ens.n_traj; ++k) {
          char name[64];
          std::snprintf(name, sizeof name, "trajectory%s_%04lld.csv",
                        suffix.c_str(), k);
          write_trajectory_csv(path(name), ens.trajectories[k]);
        }
      }
      break;
    }
    case RunMode::compare: {
      const UnravelingReport rep = verify_unraveling(cfg);
      write_json(path(suffixed("compare", suffix, ".json")),
                 unraveling_json(rep));
      write_exact_csv(path(suffixed("exact", suffix, ".csv")), rep.exact);
      write_ensemble_csv(path(suffixed("ensemble", suffix, ".csv")),
                         rep.ensemble);
      break;
    }
    case RunMode::classicality: {
      const long long atoms =
          cfg.bec_atoms > 0 ? cfg.bec_atoms
                            : static_cast<long long>(std::llround(2.0 * cfg.j));
      const BecClassicality bec = classicality_ratio_bec(atoms, cfg.bec_modes);
      const std::vector<double> omegas =
          !cfg.omegas.empty() ? cfg.omegas
                              : std::vector<double>{cfg.omega_scale()};
      json j;
      j["bec"] = {{"atoms", atoms},
                  {"modes", cfg.bec_modes},
                  {"casimir", bec.casimir},
                  {"delta_min", bec.delta_min},
                  {"adjoint_casimir", bec.adjoint_casimir},
                  {"ratio", bec.ratio}};
      j["local"] = {{"levels", cfg.local_levels},
                    {"ratio", classicality_ratio_local(cfg.local_levels)}};
      j["timescales"] =
          timescale_json(timescale_report(cfg.j, omegas, cfg.gamma));
      write_json(path(suffixed("classicality", suffix, ".json")), j);
      break;
    }
    case RunMode::timescales: {
      const std::vector<double> omegas =
          !cfg.omegas.empty() ? cfg.omegas
                              : std::vector<double>{cfg.omega_scale()};
      write_json(path(suffixed("timescales", suffix, ".json")),
                 timescale_json(timescale_report(cfg.j, omegas, cfg.gamma)));
      break;
    }
  }
  return out;
}

json fig1_json(const Fig1Summary& s) {
  json j;
  j["open_closed_max_dev"] = s.open_closed_max_dev;
  j["min_unitary_purity"] = s.min_unitary_purity;
  j["trajectory_purity_median_late"] = s.trajectory_purity_median_late;
  j["purity_ratio"] = s.purity_ratio;
  j["est_configs_delocalized"] = s.est_configs_delocalized;
  j["est_configs_trajectory"] = s.est_configs_trajectory;
  j["transient_cut"] = s.transient_cut;
  if (s.have_compare) j["compare"] = unraveling_json(s.compare);
  return j;
}

}

Fig1Summary run_fig1_study(const SimConfig& base, bool with_compare) {
  validate_config(base);
  const SpinRep rep = build_spin_rep(base.j);
  const ComplexMatrix h = build_hamiltonian(rep, base.hamiltonian);
  const PureState psi0 =
      coherent_amplitudes(rep, coherent_from_tau(base.initial_tau));
  const DensityMatrix rho0 = density_from_pure(psi0);
  const double dt = base.resolved_dt();

  Fig1Summary s;
  s.closed = propagate_master(rho0, h, rep, 0.0, dt, base.t_final,
                              base.sample_stride);
  s.open = propagate_master(rho0, h, rep, base.gamma, dt, base.t_final,
                            base.sample_stride);

  for (std::size_t k = 0; k < s.closed.size(); ++k) {
    s.open_closed_max_dev = std::max(
        {s.open_closed_max_dev, std::abs(s.open.jx[k] - s.closed.jx[k]),
         std::abs(s.open.jy[k] - s.closed.jy[k]),
         std::abs(s.open.jz[k] - s.closed.jz[k])});
  }
  s.min_unitary_purity = s.closed.purity_g[0];
  for (double p : s.closed.purity_g)
    s.min_unitary_purity = std::min(s.min_unitary_purity, p);

  s.trajectory = run_trajectory(psi0, base, 0);
  std::vector<double> late;
  for (std::size_t k = 0; k < s.trajectory.t.size(); ++k)
    if (s.trajectory.t[k] >= s.transient_cut)
      late.push_back(s.trajectory.purity_g[k]);
  if (late.empty())
    throw std::runtime_error("fig1 study: horizon shorter than the transient");
  std::sort(late.begin(), late.end());
  const std::size_t n = late.size();
  s.trajectory_purity_median_late =
      n % 2 ? late[n / 2] : 0.5 * (late[n / 2 - 1] + late[n / 2]);
  s.purity_ratio = s.trajectory_purity_median_late / s.min_unitary_purity;
  s.est_configs_delocalized = estimate_num_configs(s.min_unitary_purity, base.j);
  s.est_configs_trajectory =
      estimate_num_configs(s.trajectory_purity_median_late, base.j);

  if (with_compare) {
    s.have_compare = true;
    s.compare = verify_unraveling(base, s.open);
  }
  return s;
}

Fig2Point summarize_fig2_point(double j, const EnsembleResult& ens,
                               double window_start) {
  Fig2Point p;
  p.j = j;
  p.n_traj = ens.n_traj;
  double sum = 0.0;
  long long count = 0;
  for (std::size_t k = 0; k < ens.t.size(); ++k) {
    if (ens.t[k] < window_start) continue;
    sum += ens.purity_g[k];
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument("summarize_fig2_point: empty late-time window");
  p.late_mean_purity = sum / count;
  p.f = (1.0 - p.late_mean_purity) * j;
  return p;
}

double fit_fig2_f(const std::vector<Fig2Point>& points, double min_j) {
  double num = 0.0, den = 0.0;
  for (const Fig2Point& p : points) {
    if (p.j < min_j) continue;
    const double x = 1.0 / p.j;
    num += x * (1.0 - p.late_mean_purity);
    den += x * x;
  }
  if (den == 0.0)
    throw std::invalid_argument("fit_fig2_f: no points above min_j");
  return num / den;
}

void write_exact_csv(const std::string& path, const TimeSeries& ts) {
  std::string text = "t,jx,jy,jz,purity_g,purity_state,trace_err\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    text += fmt17(ts.t[k]) + "," + fmt17(ts.jx[k]) + "," + fmt17(ts.jy[k]) +
            "," + fmt17(ts.jz[k]) + "," + fmt17(ts.purity_g[k]) + "," +
            fmt17(ts.purity_state[k]) + "," + fmt17(ts.trace_err[k]) + "\n";
  }
  write_text(path, text);
}

void write_ensemble_csv(const std::string& path, const EnsembleResult& ens) {
  std::string text = "t,jx,jy,jz,jx_se,jy_se,jz_se,purity_g,purity_g_se\n";
  const auto se_field = [](double v) {
    return std::isnan(v) ? std::string() : fmt17(v);
  };
  for (std::size_t k = 0; k < ens.t.size(); ++k) {
    text += fmt17(ens.t[k]) + "," + fmt17(ens.jx[k]) + "," +
            fmt17(ens.jy[k]) + "," + fmt17(ens.jz[k]) + "," +
            se_field(ens.jx_se[k]) + "," + se_field(ens.jy_se[k]) + "," +
            se_field(ens.jz_se[k]) + "," + fmt17(ens.purity_g[k]) + "," +
            se_field(ens.purity_g_se[k]) + "\n";
  }
  write_text(path, text);
}

void write_trajectory_csv(const std::string& path, const TrajectoryResult& tr) {
  std::string text = "t,jx,jy,jz,purity_g,norm_drift\n";
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    text += fmt17(tr.t[k]) + "," + fmt17(tr.jx[k]) + "," + fmt17(tr.jy[k]) +
            "," + fmt17(tr.jz[k]) + "," + fmt17(tr.purity_g[k]) + "," +
            fmt17(tr.norm_drift[k]) + "\n";
  }
  write_text(path, text);
}

int run_plan(std::vector<SimConfig> plan, const RunnerOptions& opt) {
  if (plan.empty()) throw std::invalid_argument("run_plan: empty plan");
  if (opt.threads > 0) parallel::set_thread_count(opt.threads);
  fs::create_directories(opt.out_dir);

  for (SimConfig& cfg : plan) {
    if (opt.seed_override) cfg.master_seed = *opt.seed_override;
    if (opt.n_traj_override) cfg.n_traj = *opt.n_traj_override;
    validate_config(cfg);
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> files;

  if (opt.preset == "fig1") {
    const Fig1Summary s = run_fig1_study(plan.front(), true);
    write_exact_csv((fs::path(opt.out_dir) / "exact_closed.csv").string(),
                    s.closed);
    write_exact_csv((fs::path(opt.out_dir) / "exact_open.csv").string(),
                    s.open);
    write_trajectory_csv(
        (fs::path(opt.out_dir) / "trajectory_0000.csv").string(),
        s.trajectory);
    write_ensemble_csv((fs::path(opt.out_dir) / "ensemble.csv").string(),
                       s.compare.ensemble);
    write_json((fs::path(opt.out_dir) / "fig1_summary.json").string(),
               fig1_json(s));
    files = {"exact_closed.csv", "exact_open.csv", "trajectory_0000.csv",
             "ensemble.csv", "fig1_summary.json"};
  } else if (plan.size() > 1) {
    // Sweep plan: per-member ensemble files plus the localization summary.
    std::vector<Fig2Point> points;
    for (const SimConfig& cfg : plan) {
      const EnsembleResult ens = run_ensemble(cfg, opt.emit_trajectories);
      char name[64];
      std::snprintf(name, sizeof name, "ensemble_j%g.csv", cfg.j);
      write_ensemble_csv((fs::path(opt.out_dir) / name).string(), ens);
      files.push_back(name);
      points.push_back(
          summarize_fig2_point(cfg.j, ens, 0.5 * cfg.t_final));
    }
    json j;
    j["window_start_fraction"] = 0.5;
    for (const Fig2Point& p : points) {
      j["points"].push_back({{"j", p.j},
                             {"late_mean_purity", p.late_mean_purity},
                             {"f", p.f},
                             {"n_traj", p.n_traj}});
    }
    j["f_fit_large_j"] = fit_fig2_f(points, 16.0);
    write_json((fs::path(opt.out_dir) / "fig2_summary.json").string(), j);
    files.push_back("fig2_summary.json");
  } else {
    const ModeOutputs out = run_one(plan.front(), opt, "");
    files = out.files;
  }

  const auto t1 = std::chrono::steady_clock::now();
  json meta;
  meta["version"] = kVersion;
  meta["preset"] = opt.preset;
  meta["threads"] = parallel::thread_count();
  meta["wall_time_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  meta["files"] = files;
  for (const SimConfig& cfg : plan) {
    meta["configs"].push_back(config_json(cfg));
    meta["config_documents"].push_back(serialize_config(cfg));
  }
  write_json((fs::path(opt.out_dir) / "meta.json").string(), meta);
  return 0;
}

}
