#include "dcg/spin.hpp"

#include <cmath>
#include <stdexcept>

namespace dcg {

SpinRep build_spin_rep(double j) {
  if (!(j > 0.0) || !std::isfinite(j))
    throw std::invalid_argument("build_spin_rep: j must be positive");
  const double two_j_real = 2.0 * j;
  const int two_j = static_cast<int>(std::lround(two_j_real));
  if (std::abs(two_j_real - two_j) > 1e-9)
    throw std::invalid_argument(
        "build_spin_rep: j must be an integer or half-integer");

  SpinRep rep;
  rep.j = j;
  rep.two_j = two_j;
  rep.dim = two_j + 1;
  rep.casimir_value = j * (j + 1.0);

  rep.mz.resize(rep.dim);
  for (int r = 0; r < rep.dim; ++r) rep.mz[r] = -j + r;

  // Ladder coefficients from the integer product (2j-r)(r+1), exact in
  // double for any representable two_j, so sqrt is correctly rounded.
  rep.ladder.resize(rep.dim > 1 ? rep.dim - 1 : 0);
  for (int r = 0; r + 1 < rep.dim; ++r) {
    const double prod = static_cast<double>(two_j - r) * (r + 1);
    rep.ladder[r] = std::sqrt(prod);
  }

  rep.jx = ComplexMatrix(rep.dim);
  rep.jy = ComplexMatrix(rep.dim);
  rep.jz = ComplexMatrix(rep.dim);
  for (int r = 0; r < rep.dim; ++r) rep.jz(r, r) = rep.mz[r];
  for (int r = 0; r + 1 < rep.dim; ++r) {
    const double c = rep.ladder[r];
    // J+ = Jx + i Jy has <r+1|J+|r> = c, so
    // Jx(r,r+1) = Jx(r+1,r) = c/2 and Jy(r,r+1) = i c/2 = -Jy(r+1,r).
    rep.jx(r, r + 1) = 0.5 * c;
    rep.jx(r + 1, r) = 0.5 * c;
    rep.jy(r, r + 1) = cplx(0.0, 0.5 * c);
    rep.jy(r + 1, r) = cplx(0.0, -0.5 * c);
  }
  return rep;
}

StructureConstants structure_constants() {
  StructureConstants f{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) f[i][k][l] = 0.0;
  f[0][1][2] = 1.0;
  f[1][2][0] = 1.0;
  f[2][0][1] = 1.0;
  f[1][0][2] = -1.0;
  f[2][1][0] = -1.0;
  f[0][2][1] = -1.0;
  return f;
}

ComplexMatrix build_hamiltonian(const SpinRep& rep, const HamiltonianSpec& spec) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(spec.linear[i]))
      throw std::invalid_argument("build_hamiltonian: nonfinite linear coefficient");
    for (int k = 0; k < 3; ++k) {
      if (!std::isfinite(spec.quadratic[i][k]))
        throw std::invalid_argument(
            "build_hamiltonian: nonfinite quadratic coefficient");
      if (std::abs(spec.quadratic[i][k] - spec.quadratic[k][i]) > 1e-12)
        throw std::invalid_argument(
            "build_hamiltonian: quadratic coefficients must be symmetric");
    }
  }

  const ComplexMatrix* gen[3] = {&rep.jx, &rep.jy, &rep.jz};
  ComplexMatrix h(rep.dim);
  for (int i = 0; i < 3; ++i)
    if (spec.linear[i] != 0.0) add_scaled(h, spec.linear[i], *gen[i]);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double b = spec.quadratic[i][k];
      if (b == 0.0) continue;
      // Symmetry of b makes the i<->k sum Hermitian even though JiJk is not.
      add_scaled(h, b, matmul(*gen[i], *gen[k]));
    }
  return h;
}

void apply_su2_combo(const SpinRep& rep, cplx cx, cplx cy, cplx cz,
                     std::span<const cplx> in, std::span<cplx> out) {
  const int n = rep.dim;
  if (static_cast<int>(in.size()) != n || static_cast<int>(out.size()) != n)
    throw std::invalid_argument("apply_su2_combo: dimension mismatch");
  // cx Jx + cy Jy + cz Jz = (cx - i cy)/2 J+ + (cx + i cy)/2 J- + cz Jz,
  // so row r picks up (cx - i cy)/2 ladder[r-1] from in[r-1] and
  // (cx + i cy)/2 ladder[r] from in[r+1].
  const cplx half_minus = 0.5 * (cx - cplx(0.0, 1.0) * cy);
  const cplx half_plus = 0.5 * (cx + cplx(0.0, 1.0) * cy);
  for (int r = 0; r < n; ++r) {
    cplx acc = cz * rep.mz[r] * in[r];
    if (r > 0) acc += half_minus * rep.ladder[r - 1] * in[r - 1];
    if (r + 1 < n) acc += half_plus * rep.ladder[r] * in[r + 1];
    out[r] = acc;
  }
}

std::array<double, 3> su2_expectations(const SpinRep& rep,
                                       std::span<const cplx> psi) {
  const int n = rep.dim;
  if (static_cast<int>(psi.size()) != n)
    throw std::invalid_argument("su2_expectations: dimension mismatch");
  // <J+> = sum_r conj(psi_{r+1}) ladder[r] psi_r; Jx, Jy are its re/im parts.
  cplx jplus(0.0, 0.0);
  double jz = 0.0;
  for (int r = 0; r < n; ++r) {
    jz += rep.mz[r] * std::norm(psi[r]);
    if (r + 1 < n) jplus += std::conj(psi[r + 1]) * rep.ladder[r] * psi[r];
  }
  return {jplus.real(), jplus.imag(), jz};
}

std::array<double, 3> su2_second_moments(const SpinRep& rep,
                                         std::span<const cplx> psi) {
  const int n = rep.dim;
  if (static_cast<int>(psi.size()) != n)
    throw std::invalid_argument("su2_second_moments: dimension mismatch");
  std::vector<cplx> tmp(n);
  std::array<double, 3> out{0.0, 0.0, 0.0};
  const cplx one(1.0, 0.0);
  const cplx zero(0.0, 0.0);
  const cplx coeffs[3][3] = {{one, zero, zero}, {zero, one, zero}, {zero, zero, one}};
  for (int i = 0; i < 3; ++i) {
    apply_su2_combo(rep, coeffs[i][0], coeffs[i][1], coeffs[i][2], psi, tmp);
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += std::norm(tmp[r]);
    out[i] = s;
  }
  return out;
}

}
