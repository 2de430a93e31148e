// Exact Lindblad propagation for the isotropic su(2) coupling
//   drho/dt = -i[H, rho] - gamma sum_i [J_i, [J_i, rho]]
// via Strang splitting: exact unitary conjugation (one eigendecomposition of
// H) around fixed-step RK4 on the dissipative flow. Plain RK4 on the full
// ODE is not a positive map at the spectral ranges of interest (entrywise
// stability factors T4(-i theta) twist eigenvalues negative at theta ~ 1),
// so splitting is what keeps the positivity monitor meaningful. The
// dissipator commutes with every su(2) rotation superoperator, making the
// splitting exact for linear H. Closed-form solution for linear H included.
#pragma once

#include <array>
#include <vector>

#include "dcg/spin.hpp"
#include "dcg/state.hpp"

namespace dcg {

struct DensityMatrix {
  ComplexMatrix m;

  int dim() const { return m.dim(); }
};

DensityMatrix density_from_pure(const PureState& psi);

// Hermiticity / trace / positivity monitor. ok reflects the propagation
// abort thresholds: hermiticity and trace within 1e-10, min eigenvalue
// above -1e-8.
struct DensityCheck {
  double hermiticity_err = 0.0;
  double trace_err = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = false;
};
DensityCheck check_density(const DensityMatrix& rho);

// Generator evaluated at rho. The double commutator is expanded through
// sum_i [J_i,[J_i,rho]] = 2 c_H rho - 2 sum_i J_i rho J_i and computed on
// the band structure of H and J_i.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const SpinRep& rep, double gamma);

// Sampled observables along an exact propagation. Angular momentum entries
// are <J_i>/j; purity_g is sum (<J_i>/j)^2; purity_state is tr rho^2.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> jx, jy, jz;
  std::vector<double> purity_g;
  std::vector<double> purity_state;
  std::vector<double> trace_err;

  std::size_t size() const { return t.size(); }
};

// nsteps = round(t_final / dt); samples every sample_stride steps plus the
// final point. Unitary factors are exact; the dissipative factor advances
// by classical RK4 with fixed step dt. Density invariants are checked at
// every sample and a violation aborts with a diagnostic naming the breached
// invariant (the usual cause is a dt too large for gamma j(j+1)).
TimeSeries propagate_master(const DensityMatrix& rho0, const ComplexMatrix& h,
                            const SpinRep& rep, double gamma, double dt,
                            double t_final, int sample_stride);

// <J(t)> for H = sum_i a_i J_i: rotation about a at rate |a| damped by
// exp(-2 gamma t) (adjoint Casimir of su(2) = 2).
std::array<double, 3> analytic_linear_solution(const std::array<double, 3>& a,
                                               double gamma,
                                               const std::array<double, 3>& init,
                                               double t);

// min(1e-3, 0.05/omega, 0.05/(gamma j(j+1))), skipping absent scales.
double default_dt(double omega, double gamma, double j);

}
