#include "dcg/snlse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dcg/coherent.hpp"
#include "dcg/master.hpp"
#include "dcg/parallel.hpp"

namespace dcg {

namespace {

std::uint64_t splitmix_round(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_open(std::mt19937_64& gen) {
  // (0, 1]: 53 mantissa bits, shifted off zero so log() stays finite.
  return ((gen() >> 11) + 1) * 0x1.0p-53;
}

// exp(cx Jx + cy Jy + cz Jz) |in> by Taylor series on the tridiagonal
// action, halving the generator until its spectral radius bound |c| j
// drops under 0.5.
void exp_su2_action(const SpinRep& rep, std::array<double, 3> c,
                    std::vector<cplx>& psi, std::vector<cplx>& term,
                    std::vector<cplx>& tmp) {
  const double mag = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  const double bound = mag * rep.j;
  int halvings = 0;
  double scale = 1.0;
  while (bound * scale > 0.5 && halvings < 60) {
    scale *= 0.5;
    ++halvings;
  }
  const std::array<double, 3> cs{c[0] * scale, c[1] * scale, c[2] * scale};

  const int n = rep.dim;
  const long long reps = 1LL << halvings;
  for (long long r = 0; r < reps; ++r) {
    term = psi;
    double acc_sq = 0.0;
    for (int i = 0; i < n; ++i) acc_sq += std::norm(psi[i]);
    for (int k = 1; k <= 40; ++k) {
      apply_su2_combo(rep, cs[0], cs[1], cs[2], term, tmp);
      const double inv_k = 1.0 / k;
      double term_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        term[i] = tmp[i] * inv_k;
        psi[i] += term[i];
        term_sq += std::norm(term[i]);
      }
      acc_sq += term_sq;
      if (term_sq <= 1e-32 * acc_sq) break;
      if (k == 40)
        throw std::runtime_error("exp_su2_action: Taylor series did not converge");
    }
  }
}

struct TrajectoryContext {
  SpinRep rep;
  ComplexMatrix u_dt;
  double dt = 0.0;
  long long nsteps = 0;
  int stride = 1;
  double gamma = 0.0;
  double gamma_noise = 0.0;

  explicit TrajectoryContext(const SimConfig& cfg)
      : rep(build_spin_rep(cfg.j)) {
    validate_config(cfg);
    dt = cfg.resolved_dt();
    nsteps = std::llround(cfg.t_final / dt);
    if (nsteps < 1)
      throw std::invalid_argument("trajectory: t_final shorter than one step");
    stride = cfg.sample_stride;
    gamma = cfg.gamma;
    gamma_noise = cfg.gamma * cfg.noise_variance_scale;
    const ComplexMatrix h = build_hamiltonian(rep, cfg.hamiltonian);
    u_dt = exp_from_eig(eig_hermitian(h), cplx(0.0, -dt));
  }
};

TrajectoryResult run_trajectory_ctx(const TrajectoryContext& ctx,
                                    const PureState& psi0,
                                    std::uint64_t master_seed,
                                    long long index) {
  if (psi0.dim() != ctx.rep.dim)
    throw std::invalid_argument("run_trajectory: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("run_trajectory: initial state not normalized");

  NoiseStream stream = make_noise_stream(master_seed, index);
  PureState psi = psi0;
  TrajectoryResult out;

  const double inv_j = 1.0 / ctx.rep.j;
  auto record = [&](long long step) {
    const std::array<double, 3> e = su2_expectations(ctx.rep, psi.view());
    out.t.push_back(step * ctx.dt);
    out.jx.push_back(e[0] * inv_j);
    out.jy.push_back(e[1] * inv_j);
    out.jz.push_back(e[2] * inv_j);
    out.purity_g.push_back(
        (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]) * inv_j * inv_j);
    out.norm_drift.push_back(std::abs(psi.norm() - 1.0));
  };

  record(0);
  StepStats stats;
  for (long long step = 1; step <= ctx.nsteps; ++step) {
    const std::array<double, 3> xi =
        draw_increments(stream, ctx.dt, ctx.gamma_noise);
    psi = snlse_step(psi, ctx.u_dt, ctx.rep, ctx.gamma, ctx.dt, xi, &stats);
    out.max_step_residual = std::max(out.max_step_residual,
                                     stats.pre_renorm_residual);
    if (step % ctx.stride == 0 || step == ctx.nsteps) record(step);
  }
  return out;
}

}

NoiseStream make_noise_stream(std::uint64_t master_seed, long long index) {
  if (index < 0)
    throw std::invalid_argument("make_noise_stream: index must be nonnegative");
  NoiseStream s;
  s.master_seed = master_seed;
  s.trajectory_index = index;
  const std::uint64_t mixed = splitmix_round(splitmix_round(
      master_seed ^ (0x9E3779B97F4A7C15ULL *
                     (static_cast<std::uint64_t>(index) + 1ULL))));
  s.gen.seed(mixed);
  return s;
}

std::array<double, 3> draw_increments(NoiseStream& stream, double dt,
                                      double gamma) {
  if (!(dt > 0.0))
    throw std::invalid_argument("draw_increments: dt must be positive");
  if (gamma < 0.0)
    throw std::invalid_argument("draw_increments: gamma must be nonnegative");
  if (gamma == 0.0) return {0.0, 0.0, 0.0};
  const double sigma = std::sqrt(2.0 * gamma * dt);
  // Two Box-Muller pairs; the fourth normal is discarded so every call
  // consumes exactly four generator words.
  const double u1 = uniform_open(stream.gen);
  const double u2 = uniform_open(stream.gen);
  const double u3 = uniform_open(stream.gen);
  const double u4 = uniform_open(stream.gen);
  const double r1 = std::sqrt(-2.0 * std::log(u1));
  const double a1 = 2.0 * std::numbers::pi * u2;
  const double r2 = std::sqrt(-2.0 * std::log(u3));
  const double a2 = 2.0 * std::numbers::pi * u4;
  return {sigma * r1 * std::cos(a1), sigma * r1 * std::sin(a1),
          sigma * r2 * std::cos(a2)};
}

PureState snlse_step(const PureState& psi, const ComplexMatrix& u_dt,
                     const SpinRep& rep, double gamma, double dt,
                     const std::array<double, 3>& xi, StepStats* stats) {
  if (psi.dim() != rep.dim || u_dt.dim() != rep.dim)
    throw std::invalid_argument("snlse_step: dimension mismatch");

  PureState next;
  next.amp.resize(rep.dim);
  matvec(u_dt, psi.view(), next.view());

  // Exact one-step solution of the locally linearized equation: converting
  // the Ito increment with drift -gamma sum (J_i - e_i)^2 dt into a single
  // exponential doubles that drift, and completing the square then leaves
  // 4 gamma e_i dt next to the noise (the remainder is scalar because
  // sum J_i^2 is the Casimir).
  const std::array<double, 3> e = su2_expectations(rep, next.view());
  const std::array<double, 3> c{4.0 * gamma * e[0] * dt + xi[0],
                                4.0 * gamma * e[1] * dt + xi[1],
                                4.0 * gamma * e[2] * dt + xi[2]};

  const double e_dot_xi = e[0] * xi[0] + e[1] * xi[1] + e[2] * xi[2];
  double z_sq = 0.0;
  if (stats && (xi[0] != 0.0 || xi[1] != 0.0 || xi[2] != 0.0)) {
    // ||sum (J_i - e_i) xi_i |psi>||^2, the quadratic noise term of the
    // predictable norm growth; taken before the factor is applied.
    std::vector<cplx> zpsi(rep.dim);
    apply_su2_combo(rep, xi[0], xi[1], xi[2], next.amp, zpsi);
    for (int r = 0; r < rep.dim; ++r) {
      zpsi[r] -= e_dot_xi * next.amp[r];
      z_sq += std::norm(zpsi[r]);
    }
  }

  if (c[0] != 0.0 || c[1] != 0.0 || c[2] != 0.0) {
    std::vector<cplx> term(rep.dim), tmp(rep.dim);
    exp_su2_action(rep, c, next.amp, term, tmp);
  }

  const double norm = next.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::runtime_error("snlse_step: state norm degenerate after step");

  if (stats) {
    // Every norm-growth term predictable through O(dt): drift (the Casimir
    // parts cancel, leaving 4 gamma e^2 dt), linear noise, and quadratic
    // noise; what remains is genuine splitting error.
    const double e_sq = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    const double predicted = 4.0 * gamma * e_sq * dt + e_dot_xi + z_sq;
    stats->pre_renorm_residual = std::abs(std::log(norm) - predicted);
  }

  const double inv = 1.0 / norm;
  for (cplx& a : next.amp) a *= inv;
  return next;
}

TrajectoryResult run_trajectory(const PureState& psi0, const SimConfig& cfg,
                                long long index) {
  const TrajectoryContext ctx(cfg);
  return run_trajectory_ctx(ctx, psi0, cfg.master_seed, index);
}

EnsembleResult run_ensemble(const SimConfig& cfg, bool keep_trajectories) {
  if (cfg.n_traj < 1)
    throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
  const TrajectoryContext ctx(cfg);
  const PureState psi0 =
      coherent_amplitudes(ctx.rep, coherent_from_tau(cfg.initial_tau));

  const long long n = cfg.n_traj;
  std::vector<TrajectoryResult> results(n);
  std::vector<std::string> errors(n);
  bool failed = false;

  const int threads = parallel::thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long k = 0; k < n; ++k) {
    try {
      results[k] = run_trajectory_ctx(ctx, psi0, cfg.master_seed, k);
    } catch (const std::exception& ex) {
      errors[k] = ex.what();
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) {
    for (long long k = 0; k < n; ++k)
      if (!errors[k].empty())
        throw std::runtime_error("run_ensemble: trajectory " +
                                 std::to_string(k) + " aborted: " + errors[k]);
  }

  EnsembleResult out;
  out.n_traj = n;
  out.t = results[0].t;
  const std::size_t nt = out.t.size();
  const double nan = std::nan("");

  // Fixed index-order reduction: mean first, then the spread, both summed
  // trajectory-ascending so output does not depend on the worker count.
  const std::vector<double> TrajectoryResult::* fields[4] = {
      &TrajectoryResult::jx, &TrajectoryResult::jy, &TrajectoryResult::jz,
      &TrajectoryResult::purity_g};
  std::vector<double>* means[4] = {&out.jx, &out.jy, &out.jz, &out.purity_g};
  std::vector<double>* ses[4] = {&out.jx_se, &out.jy_se, &out.jz_se,
                                 &out.purity_g_se};
  for (int f = 0; f < 4; ++f) {
    means[f]->assign(nt, 0.0);
    ses[f]->assign(nt, nan);
  }
  for (long long k = 0; k < n; ++k) {
    if (results[k].t.size() != nt)
      throw std::runtime_error("run_ensemble: inconsistent sample grids");
    for (int f = 0; f < 4; ++f) {
      const std::vector<double>& x = results[k].*fields[f];
      for (std::size_t s = 0; s < nt; ++s) (*means[f])[s] += x[s];
    }
    out.max_step_residual =
        std::max(out.max_step_residual, results[k].max_step_residual);
  }
  for (int f = 0; f < 4; ++f)
    for (std::size_t s = 0; s < nt; ++s) (*means[f])[s] /= n;
  if (n > 1) {
    for (int f = 0; f < 4; ++f) {
      std::vector<double> ssq(nt, 0.0);
      for (long long k = 0; k < n; ++k) {
        const std::vector<double>& x = results[k].*fields[f];
        for (std::size_t s = 0; s < nt; ++s) {
          const double d = x[s] - (*means[f])[s];
          ssq[s] += d * d;
        }
      }
      for (std::size_t s = 0; s < nt; ++s)
        (*ses[f])[s] = std::sqrt(ssq[s] / (static_cast<double>(n - 1) * n));
    }
  }

  if (keep_trajectories) out.trajectories = std::move(results);
  return out;
}

UnravelingReport verify_unraveling(const SimConfig& cfg) {
  validate_config(cfg);
  if (2.0 * cfg.j + 1.0 > 512.0)
    throw std::invalid_argument(
        "verify_unraveling: dimension too large for the exact reference");
  const SpinRep rep = build_spin_rep(cfg.j);
  const ComplexMatrix h = build_hamiltonian(rep, cfg.hamiltonian);
  const DensityMatrix rho0 = density_from_pure(
      coherent_amplitudes(rep, coherent_from_tau(cfg.initial_tau)));
  const TimeSeries exact =
      propagate_master(rho0, h, rep, cfg.gamma, cfg.resolved_dt(),
                       cfg.t_final, cfg.sample_stride);
  return verify_unraveling(cfg, exact);
}

UnravelingReport verify_unraveling(const SimConfig& cfg,
                                   const TimeSeries& exact) {
  validate_config(cfg);
  if (cfg.n_traj < 2)
    throw std::invalid_argument(
        "verify_unraveling: need n_traj >= 2 for standard errors");
  const EnsembleResult ens = run_ensemble(cfg);

  if (exact.t.size() != ens.t.size())
    throw std::runtime_error("verify_unraveling: sample grids disagree");

  UnravelingReport out;
  out.t = ens.t;
  out.n_traj = ens.n_traj;
  out.pass = true;
  const std::vector<double>* exact_j[3] = {&exact.jx, &exact.jy, &exact.jz};
  const std::vector<double>* ens_j[3] = {&ens.jx, &ens.jy, &ens.jz};
  const std::vector<double>* ens_se[3] = {&ens.jx_se, &ens.jy_se, &ens.jz_se};
  for (int i = 0; i < 3; ++i) {
    const std::size_t nt = out.t.size();
    out.abs_dev[i].resize(nt);
    out.sigma_units[i].resize(nt);
    for (std::size_t s = 0; s < nt; ++s) {
      const double dev = std::abs((*ens_j[i])[s] - (*exact_j[i])[s]);
      const double se = (*ens_se[i])[s];
      const double sig = dev == 0.0 ? 0.0 : dev / std::max(se, 1e-15);
      out.abs_dev[i][s] = dev;
      out.sigma_units[i][s] = sig;
      out.max_abs_dev[i] = std::max(out.max_abs_dev[i], dev);
      out.max_sigma_units[i] = std::max(out.max_sigma_units[i], sig);
      // A point fails only when it is both statistically significant and
      // physically large; at small n_traj the standard error alone can
      // exceed the absolute floor.
      if (dev > out.abs_tolerance && sig > out.sigma_tolerance)
        out.pass = false;
    }
  }
  out.exact = exact;
  out.ensemble = ens;
  return out;
}

}
