// Spin-j representation of su(2): generator matrices, structure constants,
// Hamiltonian assembly, and O(dim) tridiagonal actions used by the
// trajectory propagator.
#pragma once

#include <array>
#include <span>
#include <vector>

#include "dcg/matrix.hpp"

namespace dcg {

// Basis is |j,m> with m = -j..+j ascending, so Jz = diag(-j..+j).
struct SpinRep {
  double j = 0.0;
  int two_j = 0;
  int dim = 0;
  ComplexMatrix jx, jy, jz;
  double casimir_value = 0.0;                 // j(j+1)
  static constexpr double adjoint_casimir = 2.0;
  // ladder[r] couples m_r and m_{r+1}: <m_{r+1}| J+ |m_r> = sqrt((2j-r)(r+1)).
  std::vector<double> ladder;
  std::vector<double> mz;
};

// j must be a positive integer or half-integer.
SpinRep build_spin_rep(double j);

// f[i][k][l] with [X_i, X_k] = i * sum_l f_ikl X_l; for su(2) f_ikl = eps_ikl.
using StructureConstants = std::array<std::array<std::array<double, 3>, 3>, 3>;
StructureConstants structure_constants();

// H = sum_i linear[i] J_i + sum_ik quadratic[i][k] J_i J_k.
// quadratic must be symmetric so H is Hermitian.
struct HamiltonianSpec {
  std::array<double, 3> linear{0.0, 0.0, 0.0};
  std::array<std::array<double, 3>, 3> quadratic{{{0.0, 0.0, 0.0},
                                                  {0.0, 0.0, 0.0},
                                                  {0.0, 0.0, 0.0}}};
};

ComplexMatrix build_hamiltonian(const SpinRep& rep, const HamiltonianSpec& spec);

// out = (cx Jx + cy Jy + cz Jz) in, touching only the tridiagonal band.
void apply_su2_combo(const SpinRep& rep, cplx cx, cplx cy, cplx cz,
                     std::span<const cplx> in, std::span<cplx> out);

// <Jx>, <Jy>, <Jz> of a normalized state, O(dim).
std::array<double, 3> su2_expectations(const SpinRep& rep,
                                       std::span<const cplx> psi);

// <Jx^2>, <Jy^2>, <Jz^2> of a normalized state, O(dim).
std::array<double, 3> su2_second_moments(const SpinRep& rep,
                                         std::span<const cplx> psi);

}
