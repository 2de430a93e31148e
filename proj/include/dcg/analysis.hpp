// Scalar diagnostics: total uncertainty, generalized purity, purity loss
// rate, classicality ratios, timescale separation, and realization-count
// bounds.
#pragma once

#include <array>
#include <vector>

#include "dcg/spin.hpp"
#include "dcg/state.hpp"

namespace dcg {

// Delta(psi) = sum_i (<J_i^2> - <J_i>^2); equals j for coherent states and
// j(j+1) at the maximally delocalized extreme.
double total_uncertainty(const PureState& psi, const SpinRep& rep);

// sum_i <J_i>^2, divided by j^2 when normalized. Delta + raw purity is the
// Casimir value identically.
double generalized_purity(const PureState& psi, const SpinRep& rep,
                          bool normalized);

// d(tr rho^2)/dt = -4 gamma Delta(psi) at a pure state of the spin Lindblad
// generator.
double purity_loss_rate(const PureState& psi, const SpinRep& rep, double gamma);

// Two-mode condensate of N atoms in the n-fold symmetric-power algebra:
// minimal relative uncertainty Delta_min / c_H = n / (N + n).
struct BecClassicality {
  double casimir = 0.0;       // (n-1) N (N+n) / (2n)
  double delta_min = 0.0;     // N (n-1) / 2
  double adjoint_casimir = 0.0;  // n
  double ratio = 0.0;         // n / (N + n)
};
BecClassicality classicality_ratio_bec(long long n_atoms, int n);

// Single d-level system described by su(d): Delta_min / c_H = d / (d+1).
double classicality_ratio_local(int d);

// Bath-induced timescale chain 1/(gamma c_H) << 1/omega << 1/(gamma c_adj):
// decoherence must outrun the slowest oscillation and relaxation must lag
// the fastest one.
struct TimescaleReport {
  double decoherence_time = 0.0;           // 1 / (gamma c_H)
  std::vector<double> oscillation_times;   // 1 / omega_i
  double relaxation_time = 0.0;            // 1 / (gamma c_adj)
  double link1_factor = 0.0;  // min oscillation time / decoherence time
  double link2_factor = 0.0;  // relaxation time / max oscillation time
  bool chain_satisfied = false;
};
TimescaleReport timescale_report(double j, const std::vector<double>& omegas,
                                 double gamma, double separation = 10.0);

// Trajectory-count estimate n_i = D_i / eps^2 per observable, with
// sum_i D_i = c_H - sum_i <J_i>^2 as a consistency check and the
// all-observables bound 3 * max_i n_i.
struct RealizationBound {
  std::array<double, 3> per_observable_n{0.0, 0.0, 0.0};
  double sum_identity_check = 0.0;
  double n_st_bound = 0.0;
};
RealizationBound realization_bound(double eps, const SpinRep& rep,
                                   const PureState& psi);

// m = 4M real parameters for M coherent configurations (two sphere
// coordinates plus a complex weight each), below the M(K+2) = 5M bound.
struct GcsParameterCount {
  double m = 0.0;
  double bound = 0.0;
};
GcsParameterCount gcs_parameter_count(double num_configs);

}
