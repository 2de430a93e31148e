// Timing comparison of the serial reference kernels against the OpenMP ones,
// plus end-to-end rates for the master equation and trajectory ensembles.
#include <chrono>
#include <cstdio>
#include <random>

#include "dcg/coherent.hpp"
#include "dcg/config.hpp"
#include "dcg/master.hpp"
#include "dcg/matrix.hpp"
#include "dcg/parallel.hpp"
#include "dcg/snlse.hpp"
#include "dcg/spin.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

static dcg::ComplexMatrix random_matrix(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  dcg::ComplexMatrix m(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = {u(gen), u(gen)};
  return m;
}

static void bench_matmul(int dim, int threads, int reps) {
  dcg::ComplexMatrix a = random_matrix(dim, 11);
  dcg::ComplexMatrix b = random_matrix(dim, 12);
  dcg::ComplexMatrix out(dim);

  auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) dcg::matmul_serial(a, b, out);
  double serial = seconds_since(t0) / reps;

  t0 = Clock::now();
  for (int r = 0; r < reps; ++r) dcg::matmul_omp(a, b, out, threads);
  double omp = seconds_since(t0) / reps;

  std::printf("matmul dim=%4d   serial %9.3f ms   omp(%d) %9.3f ms   speedup %.2fx\n",
              dim, serial * 1e3, threads, omp * 1e3, serial / omp);
}

static void bench_band(int two_j, int threads, int reps) {
  dcg::SpinRep rep = dcg::build_spin_rep(0.5 * two_j);
  dcg::BandMatrix jx_band = dcg::BandMatrix::from_dense(rep.jx);
  dcg::ComplexMatrix rho = random_matrix(rep.dim, 21);
  dcg::ComplexMatrix out(rep.dim);

  auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) dcg::band_mul_dense_serial(jx_band, rho, out);
  double serial = seconds_since(t0) / reps;

  t0 = Clock::now();
  for (int r = 0; r < reps; ++r) dcg::band_mul_dense_omp(jx_band, rho, out, threads);
  double omp = seconds_since(t0) / reps;

  t0 = Clock::now();
  for (int r = 0; r < reps; ++r) dcg::matmul_serial(rep.jx, rho, out);
  double dense = seconds_since(t0) / reps;

  std::printf(
      "band*dense dim=%4d   serial %8.3f ms   omp(%d) %8.3f ms   dense path %8.3f ms\n",
      rep.dim, serial * 1e3, threads, omp * 1e3, dense * 1e3);
}

static void bench_master(double j, double dt, double t_final) {
  dcg::SpinRep rep = dcg::build_spin_rep(j);
  dcg::HamiltonianSpec spec;
  spec.linear[0] = -15.0;
  spec.quadratic[2][2] = 15.0 / (2.0 * j);
  dcg::ComplexMatrix h = dcg::build_hamiltonian(rep, spec);
  dcg::DensityMatrix rho =
      dcg::density_from_pure(dcg::coherent_amplitudes(rep, dcg::CoherentParam{}));

  auto t0 = Clock::now();
  dcg::TimeSeries ts =
      dcg::propagate_master(rho, h, rep, 0.05 / j, dt, t_final, 100);
  double wall = seconds_since(t0);
  std::printf("master j=%g dt=%g t=%g   %.2f s   (%zu samples)\n", j, dt, t_final,
              wall, ts.size());
}

static void bench_ensemble(double j, long long n_traj, int threads) {
  dcg::SimConfig cfg;
  cfg.mode = dcg::RunMode::stochastic;
  cfg.j = j;
  cfg.gamma = 0.05 / j;
  cfg.hamiltonian.linear[0] = -15.0;
  cfg.hamiltonian.quadratic[2][2] = 15.0 / (2.0 * j);
  cfg.t_final = 2.0;
  cfg.n_traj = n_traj;
  cfg.master_seed = 99;

  dcg::parallel::set_thread_count(threads);
  auto t0 = Clock::now();
  dcg::EnsembleResult ens = dcg::run_ensemble(cfg);
  double wall = seconds_since(t0);
  dcg::parallel::set_thread_count(0);
  std::printf("ensemble j=%g n=%lld threads=%d   %.2f s   (%zu samples)\n", j, n_traj,
              threads, wall, ens.t.size());
}

int main() {
  std::printf("worker threads resolved: %d\n\n", dcg::parallel::thread_count());

  for (int dim : {64, 129, 257}) bench_matmul(dim, 4, dim > 200 ? 4 : 16);
  std::printf("\n");
  for (int two_j : {128, 256}) bench_band(two_j, 4, 64);
  std::printf("\n");
  bench_master(32.0, 1e-3, 2.0);
  bench_master(64.0, 1e-3, 2.0);
  std::printf("\n");
  bench_ensemble(8.0, 32, 1);
  bench_ensemble(8.0, 32, 4);
  return 0;
}
