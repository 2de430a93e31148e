// Spin coherent states: amplitudes, overlaps, expectation symbols, the
// nonunitary SL(2,C) orbit action, resolution-of-identity quadrature, and
// the configuration-count estimate.
#pragma once

#include <array>

#include "dcg/spin.hpp"
#include "dcg/state.hpp"

namespace dcg {

// Projective pair (u, v) with |u|^2 + |v|^2 = 1; (1, tau)/sqrt(1+|tau|^2)
// for finite stereographic tau, (0, 1) for the tau -> infinity pole.
// No phase canonicalization: comparisons are projective.
struct CoherentParam {
  cplx u{1.0, 0.0};
  cplx v{0.0, 0.0};
};

// Normalizes; rejects the zero pair and nonfinite input.
CoherentParam make_coherent_param(cplx u, cplx v);
CoherentParam coherent_from_tau(cplx tau);

// 1 - |<p1|p2>| in the fundamental representation: 0 iff same ray.
double projective_mismatch(const CoherentParam& p1, const CoherentParam& p2);

// Basis amplitudes sqrt(C(2j, j+m)) u^{j-m} v^{j+m}, normalized.
// Computed in log space so extreme |tau| stays finite at large j.
PureState coherent_amplitudes(const SpinRep& rep, const CoherentParam& p);

// <p1|p2> = (conj(u1) u2 + conj(v1) v2)^{2j}.
cplx coherent_overlap(const CoherentParam& p1, const CoherentParam& p2,
                      double j);

// (<Jx>, <Jy>, <Jz>) = j (2 Re(conj(u) v), -2 Im(conj(u) v), |v|^2 - |u|^2).
std::array<double, 3> coherent_expectations(const CoherentParam& p, double j);

// Action of exp(cx Jx + cy Jy + cz Jz) on the coherent family through the
// 2x2 fundamental image: exp(...) |p> = e^{log_factor} |param>.
// The log factor is real, 2j ln s with s the image norm.
struct GroupActionResult {
  CoherentParam param;
  double log_factor = 0.0;
};
GroupActionResult nonunitary_group_action(const CoherentParam& p,
                                          const std::array<cplx, 3>& c,
                                          double j);

// Max-entry deviation of the quadrature sum over |p><p| from identity.
// Gauss-Legendre in cos(theta) with `order` nodes, 2*order - 1 azimuthal
// nodes; exact (to roundoff) once order >= j + 1.
double resolution_check(double j, int order);

// M = (2j+1)(1 - sqrt(P)) for generalized purity P in (0, 1].
double estimate_num_configs(double purity, double j);

}
