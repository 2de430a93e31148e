// Acceptance gate: twelve checks, one [PASS]/[FAIL] line each, exit code
// equal to the number of failures. Statistical checks run at frozen seeds.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dcg/analysis.hpp"
#include "dcg/coherent.hpp"
#include "dcg/config.hpp"
#include "dcg/master.hpp"
#include "dcg/matrix.hpp"
#include "dcg/parallel.hpp"
#include "dcg/runner.hpp"
#include "dcg/snlse.hpp"
#include "dcg/spin.hpp"
#include "dcg/state.hpp"
#include "test_helpers.hpp"

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

void report(int id, bool ok, double secs, const std::string& detail) {
  std::printf("[%s] C%-2d %s (%.1f s)\n", ok ? "PASS" : "FAIL", id,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

// C1: algebra exactness across representation sizes.
void c1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double j : {0.5, 1.0, 8.0, 64.0}) {
    const dcg::SpinRep rep = dcg::build_spin_rep(j);
    const dcg::ComplexMatrix* ops[3] = {&rep.jx, &rep.jy, &rep.jz};
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, dcg::hermiticity_error(*ops[i]));
      // [J_i, J_{i+1}] = i J_{i+2}, cyclically.
      const dcg::ComplexMatrix ab = dcg::matmul(*ops[i], *ops[(i + 1) % 3]);
      const dcg::ComplexMatrix ba = dcg::matmul(*ops[(i + 1) % 3], *ops[i]);
      dcg::ComplexMatrix comm = ab;
      dcg::add_scaled(comm, -1.0, ba);
      dcg::add_scaled(comm, dcg::cplx(0.0, -1.0), *ops[(i + 2) % 3]);
      worst = std::max(worst, dcg::max_abs(comm));
    }
    dcg::ComplexMatrix casimir(rep.dim);
    for (int i = 0; i < 3; ++i)
      dcg::add_scaled(casimir, 1.0, dcg::matmul(*ops[i], *ops[i]));
    dcg::ComplexMatrix id = dcg::ComplexMatrix::identity(rep.dim);
    dcg::add_scaled(casimir, -rep.casimir_value, id);
    worst = std::max(worst, dcg::max_abs(casimir));
  }
  const double secs = seconds_since(t0);
  report(1, worst <= 1e-10 && secs < 1.0,
         secs, fmt("algebra: worst deviation %.2e (tol 1e-10)", worst));
}

// C2: purity loss rate at pure states vs a Richardson finite difference.
void c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const dcg::SpinRep rep = dcg::build_spin_rep(8.0);
  dcg::HamiltonianSpec spec;
  spec.linear = {3.0, -1.0, 2.0};
  const dcg::ComplexMatrix h = dcg::build_hamiltonian(rep, spec);
  const double gamma = 0.15;
  const double step = 1e-4;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const dcg::PureState psi = testutil::random_state(rep.dim, 1000 + k);
    const double exact = dcg::purity_loss_rate(psi, rep, gamma);
    const dcg::DensityMatrix rho0 = dcg::density_from_pure(psi);
    const auto fd = [&](double t) {
      const dcg::TimeSeries ts =
          dcg::propagate_master(rho0, h, rep, gamma, t / 32.0, t, 32);
      return (ts.purity_state.back() - ts.purity_state.front()) / t;
    };
    // At a fixed step count the splitting error also scales as t^2, so a
    // three-point Richardson in the horizon removes it with the curvature.
    const double rate =
        (8.0 * fd(step / 4.0) - 6.0 * fd(step / 2.0) + fd(step)) / 3.0;
    worst = std::max(worst, std::abs(rate - exact) / std::abs(exact));
  }
  report(2, worst <= 1e-6, seconds_since(t0),
         fmt("purity rate: worst relative error %.2e (tol 1e-6)", worst));
}

// C3: linear Hamiltonian vs the rotating exponential-decay closed form.
void c3() {
  const auto t0 = std::chrono::steady_clock::now();
  const dcg::SimConfig cfg = dcg::preset_config("linear");
  const dcg::SpinRep rep = dcg::build_spin_rep(cfg.j);
  const dcg::ComplexMatrix h = dcg::build_hamiltonian(rep, cfg.hamiltonian);
  const dcg::CoherentParam p0 = dcg::coherent_from_tau(cfg.initial_tau);
  const dcg::DensityMatrix rho0 =
      dcg::density_from_pure(dcg::coherent_amplitudes(rep, p0));
  const dcg::TimeSeries ts =
      dcg::propagate_master(rho0, h, rep, cfg.gamma, cfg.resolved_dt(),
                            cfg.t_final, cfg.sample_stride);
  const std::array<double, 3> init = dcg::coherent_expectations(p0, 1.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    const std::array<double, 3> ref = dcg::analytic_linear_solution(
        cfg.hamiltonian.linear, cfg.gamma, init, ts.t[s]);
    worst = std::max({worst, std::abs(ts.jx[s] - ref[0]),
                      std::abs(ts.jy[s] - ref[1]), std::abs(ts.jz[s] - ref[2])});
  }
  report(3, worst <= 1e-6, seconds_since(t0),
         fmt("linear closed form: max abs error %.2e (tol 1e-6)", worst));
}

// C4: unraveling consistency at j = 8 with 2000 trajectories, strict
// both-bounds rule, plus a miscalibrated-noise negative control.
void c4() {
  const auto t0 = std::chrono::steady_clock::now();
  dcg::SimConfig cfg;
  cfg.mode = dcg::RunMode::compare;
  cfg.j = 8.0;
  cfg.gamma = 0.05 / 8.0;
  cfg.hamiltonian.linear = {-15.0, 0.0, 0.0};
  cfg.hamiltonian.quadratic[2][2] = 15.0 / 16.0;
  cfg.dt = 1e-3;
  cfg.t_final = 5.0;
  cfg.sample_stride = 100;
  cfg.n_traj = 2000;
  cfg.master_seed = 20260822ULL;

  const dcg::UnravelingReport rep = dcg::verify_unraveling(cfg);
  double dev = 0.0, sig = 0.0;
  for (int i = 0; i < 3; ++i) {
    dev = std::max(dev, rep.max_abs_dev[i]);
    sig = std::max(sig, rep.max_sigma_units[i]);
  }
  const bool forward_ok = dev <= 0.05 && sig <= 3.0;

  dcg::SimConfig wrong = cfg;
  wrong.noise_variance_scale = 2.0;
  const dcg::UnravelingReport neg = dcg::verify_unraveling(wrong, rep.exact);
  double ndev = 0.0, nsig = 0.0;
  for (int i = 0; i < 3; ++i) {
    ndev = std::max(ndev, neg.max_abs_dev[i]);
    nsig = std::max(nsig, neg.max_sigma_units[i]);
  }
  const bool control_fails = !(ndev <= 0.05 && nsig <= 3.0);

  report(4, forward_ok && control_fails, seconds_since(t0),
         fmt("unraveling n=2000: dev %.3f sig %.2f; doubled-variance control "
             "dev %.3f sig %.1f %s",
             dev, sig, ndev, nsig, control_fails ? "rejected" : "ACCEPTED"));
}

// C5: the delocalization study at j = 64.
void c5() {
  const auto t0 = std::chrono::steady_clock::now();
  const dcg::Fig1Summary s = dcg::run_fig1_study(dcg::preset_config("fig1"),
                                                 true);
  const bool a = s.open_closed_max_dev <= 0.05;
  const bool b = std::abs(s.min_unitary_purity - 0.06) <= 0.03;
  const bool c = s.trajectory_purity_median_late >= 0.85 &&
                 s.trajectory_purity_median_late <= 0.97;
  const bool d = s.purity_ratio >= 10.0;
  report(5, a && b && c && d && s.compare.pass, seconds_since(t0),
         fmt("delocalization: open-closed dev %.3f, min purity %.3f, "
             "trajectory median %.3f, ratio %.1f, compare %s",
             s.open_closed_max_dev, s.min_unitary_purity,
             s.trajectory_purity_median_late, s.purity_ratio,
             s.compare.pass ? "pass" : "FAIL"));
}

// C6: late-time purity across the size sweep fits 1 - f/j with f = 3 +- 1.
void c6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<dcg::Fig2Point> points;
  for (const dcg::SimConfig& cfg : dcg::preset_plan("fig2"))
    points.push_back(dcg::summarize_fig2_point(cfg.j, dcg::run_ensemble(cfg),
                                               0.5 * cfg.t_final));
  const double f = dcg::fit_fig2_f(points, 16.0);
  report(6, f >= 2.0 && f <= 4.0, seconds_since(t0),
         fmt("localization sweep: fitted f %.3f (need 3 +- 1)", f));
}

// C7: realization-count estimator at the two published operating points.
void c7() {
  const auto t0 = std::chrono::steady_clock::now();
  const double deloc = dcg::estimate_num_configs(0.06, 64.0);
  const double traj = dcg::estimate_num_configs(0.92, 64.0);
  report(7, deloc >= 95.0 && deloc <= 100.0 && traj >= 4.5 && traj <= 6.5,
         seconds_since(t0),
         fmt("config estimator: M(0.06) %.2f in [95,100], M(0.92) %.2f in "
             "[4.5,6.5]", deloc, traj));
}

// C8: classicality ratio calculators against their closed forms.
void c8() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (double j : {1.0, 8.0, 64.0, 512.0}) {
    const long long atoms = static_cast<long long>(2.0 * j);
    ok = ok && dcg::classicality_ratio_bec(atoms, 2).ratio == 1.0 / (j + 1.0);
  }
  ok = ok && dcg::classicality_ratio_local(2) == 2.0 / 3.0;
  report(8, ok, seconds_since(t0),
         fmt("classicality ratios: bec 2/(2j+2) = 1/(j+1) exactly, local %.17g",
             dcg::classicality_ratio_local(2)));
}

// C9: dispersion sum identity on random states.
void c9() {
  const auto t0 = std::chrono::steady_clock::now();
  const double js[6] = {0.5, 1.0, 2.0, 5.0, 8.0, 16.0};
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const dcg::SpinRep rep = dcg::build_spin_rep(js[k % 6]);
    const dcg::PureState psi = testutil::random_state(rep.dim, 3000 + k);
    const double sum = dcg::total_uncertainty(psi, rep) +
                       dcg::generalized_purity(psi, rep, false);
    worst = std::max(worst, std::abs(sum - rep.casimir_value));
  }
  report(9, worst <= 1e-10, seconds_since(t0),
         fmt("uncertainty + purity = Casimir: worst deviation %.2e "
             "(tol 1e-10)", worst));
}

// C10: coherent-family group action vs the dense matrix exponential.
void c10() {
  const auto t0 = std::chrono::steady_clock::now();
  const double js[7] = {0.5, 1.0, 1.5, 2.0, 4.0, 8.0, 16.0};
  std::mt19937_64 gen(4242);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double j = js[k % 7];
    const dcg::SpinRep rep = dcg::build_spin_rep(j);
    const dcg::CoherentParam p =
        dcg::coherent_from_tau({0.4 * g(gen), 0.4 * g(gen)});
    std::array<dcg::cplx, 3> c;
    for (int i = 0; i < 3; ++i) c[i] = {0.5 * g(gen), 0.5 * g(gen)};
    const dcg::GroupActionResult act = dcg::nonunitary_group_action(p, c, j);
    const dcg::PureState mobius = dcg::coherent_amplitudes(rep, act.param);
    dcg::PureState dense =
        testutil::dense_su2_exp_action(rep, c, dcg::coherent_amplitudes(rep, p));
    dense.normalize();
    worst = std::min(worst, dcg::fidelity(mobius, dense));
  }
  report(10, worst >= 1.0 - 1e-8, seconds_since(t0),
         fmt("group action vs dense exponential: min fidelity 1 - %.2e "
             "(tol 1e-8)", 1.0 - worst));
}

// C11: strong convergence under step halving with a shared Brownian path;
// the finest level's increments are block-summed for the coarser levels.
void c11() {
  const auto t0 = std::chrono::steady_clock::now();
  const dcg::SpinRep rep = dcg::build_spin_rep(8.0);
  dcg::HamiltonianSpec spec;
  spec.linear = {-15.0, 0.0, 0.0};
  spec.quadratic[2][2] = 15.0 / 16.0;
  const dcg::HermitianEig eig =
      dcg::eig_hermitian(dcg::build_hamiltonian(rep, spec));
  const double gamma = 0.05 / 8.0;
  const double dt0 = 2e-3;
  const int levels = 5;
  const int realizations = 16;
  const long long nfine = 8000;  // t_final = 1 at dt0 / 16

  const dcg::PureState psi0 =
      dcg::coherent_amplitudes(rep, dcg::coherent_from_tau({0.0, 0.0}));
  std::vector<dcg::ComplexMatrix> u(levels);
  for (int L = 0; L < levels; ++L)
    u[L] = dcg::exp_from_eig(eig, dcg::cplx(0.0, -dt0 / double(1 << L)));

  std::array<double, 4> err{};
  for (int r = 0; r < realizations; ++r) {
    dcg::NoiseStream stream = dcg::make_noise_stream(77001, r);
    std::vector<std::array<double, 3>> fine(nfine);
    for (long long s = 0; s < nfine; ++s)
      fine[s] = dcg::draw_increments(stream, dt0 / 16.0, gamma);

    std::array<std::array<double, 3>, 5> obs{};
    for (int L = 0; L < levels; ++L) {
      const int block = 16 >> L;
      const double dt = dt0 / double(1 << L);
      dcg::PureState psi = psi0;
      for (long long s = 0; s < nfine; s += block) {
        std::array<double, 3> xi{0.0, 0.0, 0.0};
        for (int b = 0; b < block; ++b)
          for (int i = 0; i < 3; ++i) xi[i] += fine[s + b][i];
        psi = dcg::snlse_step(psi, u[L], rep, gamma, dt, xi);
      }
      const std::array<double, 3> e = dcg::su2_expectations(rep, psi.view());
      for (int i = 0; i < 3; ++i) obs[L][i] = e[i] / 8.0;
    }
    for (int L = 0; L + 1 < levels; ++L) {
      double d = 0.0;
      for (int i = 0; i < 3; ++i)
        d = std::max(d, std::abs(obs[L][i] - obs[L + 1][i]));
      err[L] += d / realizations;
    }
  }

  std::array<double, 3> ratio;
  bool ok = true;
  for (int L = 0; L < 3; ++L) {
    ratio[L] = err[L] / err[L + 1];
    ok = ok && ratio[L] >= 1.5 && ratio[L] <= 3.0;
  }
  report(11, ok, seconds_since(t0),
         fmt("step halving: error ratios %.2f %.2f %.2f (need in [1.5, 3])",
             ratio[0], ratio[1], ratio[2]));
}

// C12: ensemble CSV is byte identical across worker counts.
void c12() {
  const auto t0 = std::chrono::steady_clock::now();
  dcg::SimConfig cfg;
  cfg.mode = dcg::RunMode::stochastic;
  cfg.j = 4.0;
  cfg.gamma = 0.05;
  cfg.hamiltonian.linear = {-15.0, 0.0, 0.0};
  cfg.hamiltonian.quadratic[2][2] = 1.875;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.n_traj = 16;
  cfg.master_seed = 77;

  namespace fs = std::filesystem;
  const fs::path p1 = fs::temp_directory_path() / "dcg_acceptance_t1.csv";
  const fs::path p8 = fs::temp_directory_path() / "dcg_acceptance_t8.csv";
  dcg::parallel::set_thread_count(1);
  dcg::write_ensemble_csv(p1.string(), dcg::run_ensemble(cfg));
  dcg::parallel::set_thread_count(8);
  dcg::write_ensemble_csv(p8.string(), dcg::run_ensemble(cfg));
  dcg::parallel::set_thread_count(0);

  const auto slurp = [](const fs::path& p) {
    std::FILE* f = std::fopen(p.string().c_str(), "rb");
    std::string text;
    if (f) {
      char buf[4096];
      std::size_t n;
      while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
      std::fclose(f);
    }
    return text;
  };
  const std::string a = slurp(p1), b = slurp(p8);
  fs::remove(p1);
  fs::remove(p8);
  report(12, !a.empty() && a == b, seconds_since(t0),
         fmt("determinism: %zu-byte ensemble CSV identical for 1 and 8 "
             "threads", a.size()));
}

}

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  c1();
  c2();
  c3();
  c4();
  c5();
  c6();
  c7();
  c8();
  c9();
  c10();
  c11();
  c12();
  std::printf("%d/12 criteria passed (%.1f s total)\n", 12 - failures,
              seconds_since(t0));
  return failures;
}
