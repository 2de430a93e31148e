#include "dcg/master.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace dcg {

namespace {

// Banded operators and scratch space for repeated generator evaluation.
// The Hamiltonian block is optional so the propagator can integrate the
// dissipative flow alone.
struct Kernels {
  const SpinRep& rep;
  double gamma;
  bool with_h;
  BandMatrix h_band;
  std::array<BandMatrix, 3> j_band;
  ComplexMatrix tmp1, tmp2;

  Kernels(const SpinRep& r, const ComplexMatrix* h, double g)
      : rep(r), gamma(g), with_h(h != nullptr),
        h_band(h ? BandMatrix::from_dense(*h) : BandMatrix{}),
        j_band{BandMatrix::from_dense(r.jx), BandMatrix::from_dense(r.jy),
               BandMatrix::from_dense(r.jz)},
        tmp1(r.dim), tmp2(r.dim) {}

  void rhs_into(const ComplexMatrix& rho, ComplexMatrix& out) {
    if (out.dim() != rho.dim()) out = ComplexMatrix(rho.dim());
    std::fill(out.data(), out.data() + out.size(), cplx(0.0, 0.0));
    if (with_h) {
      band_mul_dense(h_band, rho, tmp1);   // H rho
      dense_mul_band(rho, h_band, tmp2);   // rho H
      add_scaled(out, cplx(0.0, -1.0), tmp1);
      add_scaled(out, cplx(0.0, 1.0), tmp2);
    }
    if (gamma > 0.0) {
      add_scaled(out, -2.0 * gamma * rep.casimir_value, rho);
      for (const BandMatrix& jb : j_band) {
        band_mul_dense(jb, rho, tmp1);   // J rho
        dense_mul_band(tmp1, jb, tmp2);  // J rho J
        add_scaled(out, 2.0 * gamma, tmp2);
      }
    }
  }
};

}

DensityMatrix density_from_pure(const PureState& psi) {
  const int n = psi.dim();
  DensityMatrix rho{ComplexMatrix(n)};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      rho.m(r, c) = psi.amp[r] * std::conj(psi.amp[c]);
  return rho;
}

DensityCheck check_density(const DensityMatrix& rho) {
  DensityCheck out;
  out.hermiticity_err = hermiticity_error(rho.m);
  out.trace_err = std::abs(trace(rho.m) - cplx(1.0, 0.0));
  out.min_eigenvalue = min_eigenvalue_hermitian(rho.m);
  out.ok = out.hermiticity_err <= 1e-10 && out.trace_err <= 1e-10 &&
           out.min_eigenvalue >= -1e-8;
  return out;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const SpinRep& rep, double gamma) {
  if (rho.dim() != rep.dim || h.dim() != rep.dim)
    throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  if (gamma < 0.0)
    throw std::invalid_argument("lindblad_rhs: gamma must be nonnegative");
  Kernels gen(rep, &h, gamma);
  ComplexMatrix out(rep.dim);
  gen.rhs_into(rho, out);
  return out;
}

TimeSeries propagate_master(const DensityMatrix& rho0, const ComplexMatrix& h,
                            const SpinRep& rep, double gamma, double dt,
                            double t_final, int sample_stride) {
  if (rho0.dim() != rep.dim || h.dim() != rep.dim)
    throw std::invalid_argument("propagate_master: dimension mismatch");
  if (!(dt > 0.0) || !(t_final >= dt))
    throw std::invalid_argument("propagate_master: need 0 < dt <= t_final");
  if (sample_stride < 1)
    throw std::invalid_argument("propagate_master: sample_stride must be >= 1");
  if (gamma < 0.0)
    throw std::invalid_argument("propagate_master: gamma must be nonnegative");

  const long long nsteps = std::llround(t_final / dt);

  // Unitary factors are exact: one eigendecomposition supplies U for any
  // span. The dissipative factor is integrated with classical RK4; its
  // stiffness gamma L(L+1) dt (L <= 2j) is what the step size must resolve.
  const HermitianEig eig = eig_hermitian(h);
  const ComplexMatrix u_half = exp_from_eig(eig, cplx(0.0, -0.5 * dt));
  const ComplexMatrix u_half_d = dagger(u_half);
  const ComplexMatrix u_full = exp_from_eig(eig, cplx(0.0, -dt));
  const ComplexMatrix u_full_d = dagger(u_full);

  ComplexMatrix rho = rho0.m;
  ComplexMatrix tmp(rep.dim);
  auto conj_with = [&](const ComplexMatrix& u, const ComplexMatrix& ud) {
    matmul_into(u, rho, tmp);
    matmul_into(tmp, ud, rho);
  };

  // Closed windows advance in one exact conjugation per sample interval.
  std::map<long long, std::pair<ComplexMatrix, ComplexMatrix>> window_u;
  auto window_pair = [&](long long len)
      -> const std::pair<ComplexMatrix, ComplexMatrix>& {
    auto it = window_u.find(len);
    if (it == window_u.end()) {
      ComplexMatrix u = exp_from_eig(eig, cplx(0.0, -dt * len));
      ComplexMatrix ud = dagger(u);
      it = window_u.emplace(len, std::make_pair(std::move(u), std::move(ud)))
               .first;
    }
    return it->second;
  };

  Kernels dis(rep, nullptr, gamma);
  ComplexMatrix k1(rep.dim), k2(rep.dim), k3(rep.dim), k4(rep.dim);
  ComplexMatrix stage(rep.dim);
  auto dissipator_step = [&]() {
    dis.rhs_into(rho, k1);
    stage = rho;
    add_scaled(stage, 0.5 * dt, k1);
    dis.rhs_into(stage, k2);
    stage = rho;
    add_scaled(stage, 0.5 * dt, k2);
    dis.rhs_into(stage, k3);
    stage = rho;
    add_scaled(stage, dt, k3);
    dis.rhs_into(stage, k4);
    add_scaled(rho, dt / 6.0, k1);
    add_scaled(rho, dt / 3.0, k2);
    add_scaled(rho, dt / 3.0, k3);
    add_scaled(rho, dt / 6.0, k4);
  };

  TimeSeries ts;
  auto record = [&](long long step) {
    const double t = step * dt;
    const DensityMatrix snap{rho};
    const DensityCheck chk = check_density(snap);
    if (!chk.ok || !std::isfinite(max_abs(rho))) {
      throw std::runtime_error(
          "propagate_master: density invariant violated at t=" +
          std::to_string(t) + " (hermiticity_err=" +
          std::to_string(chk.hermiticity_err) + ", trace_err=" +
          std::to_string(chk.trace_err) + ", min_eig=" +
          std::to_string(chk.min_eigenvalue) + "); dt too large");
    }
    ts.t.push_back(t);
    const double inv_j = 1.0 / rep.j;
    const double ex = trace_product(rho, rep.jx).real() * inv_j;
    const double ey = trace_product(rho, rep.jy).real() * inv_j;
    const double ez = trace_product(rho, rep.jz).real() * inv_j;
    ts.jx.push_back(ex);
    ts.jy.push_back(ey);
    ts.jz.push_back(ez);
    ts.purity_g.push_back(ex * ex + ey * ey + ez * ez);
    ts.purity_state.push_back(frobenius_sq(rho));
    ts.trace_err.push_back(chk.trace_err);
  };

  record(0);
  long long done = 0;
  while (done < nsteps) {
    const long long next = std::min(done + sample_stride, nsteps);
    const long long len = next - done;
    if (gamma == 0.0) {
      const auto& [u, ud] = window_pair(len);
      conj_with(u, ud);
    } else {
      // Strang factorization over the window with merged interior steps:
      // U_{dt/2} (D U_dt)^{len-1} D U_{dt/2}.
      conj_with(u_half, u_half_d);
      for (long long k = 0; k < len; ++k) {
        dissipator_step();
        if (k + 1 < len) conj_with(u_full, u_full_d);
      }
      conj_with(u_half, u_half_d);
    }
    done = next;
    record(done);
  }
  return ts;
}

std::array<double, 3> analytic_linear_solution(const std::array<double, 3>& a,
                                               double gamma,
                                               const std::array<double, 3>& init,
                                               double t) {
  if (gamma < 0.0)
    throw std::invalid_argument("analytic_linear_solution: gamma must be nonnegative");
  const double mag = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  std::array<double, 3> rotated = init;
  if (mag > 0.0) {
    const std::array<double, 3> ax{a[0] / mag, a[1] / mag, a[2] / mag};
    const double theta = mag * t;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double ad = ax[0] * init[0] + ax[1] * init[1] + ax[2] * init[2];
    const std::array<double, 3> cross{ax[1] * init[2] - ax[2] * init[1],
                                      ax[2] * init[0] - ax[0] * init[2],
                                      ax[0] * init[1] - ax[1] * init[0]};
    for (int i = 0; i < 3; ++i)
      rotated[i] = init[i] * ct + cross[i] * st + ax[i] * ad * (1.0 - ct);
  }
  const double damp = std::exp(-SpinRep::adjoint_casimir * gamma * t);
  for (double& r : rotated) r *= damp;
  return rotated;
}

double default_dt(double omega, double gamma, double j) {
  double dt = 1e-3;
  if (omega > 0.0) dt = std::min(dt, 0.05 / omega);
  if (gamma > 0.0 && j > 0.0) dt = std::min(dt, 0.05 / (gamma * j * (j + 1.0)));
  return dt;
}

}
