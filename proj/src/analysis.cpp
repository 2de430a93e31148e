#include "dcg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dcg {

namespace {

void require_normalized(const PureState& psi, const char* what) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument(std::string(what) + ": state not normalized");
}

}

double total_uncertainty(const PureState& psi, const SpinRep& rep) {
  require_normalized(psi, "total_uncertainty");
  const std::array<double, 3> e = su2_expectations(rep, psi.view());
  const std::array<double, 3> m2 = su2_second_moments(rep, psi.view());
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d += m2[i] - e[i] * e[i];
  return d;
}

double generalized_purity(const PureState& psi, const SpinRep& rep,
                          bool normalized) {
  require_normalized(psi, "generalized_purity");
  const std::array<double, 3> e = su2_expectations(rep, psi.view());
  const double raw = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
  return normalized ? raw / (rep.j * rep.j) : raw;
}

double purity_loss_rate(const PureState& psi, const SpinRep& rep,
                        double gamma) {
  if (gamma < 0.0)
    throw std::invalid_argument("purity_loss_rate: gamma must be nonnegative");
  return -4.0 * gamma * total_uncertainty(psi, rep);
}

BecClassicality classicality_ratio_bec(long long n_atoms, int n) {
  if (n_atoms < 1)
    throw std::invalid_argument("classicality_ratio_bec: need at least one atom");
  if (n < 2)
    throw std::invalid_argument("classicality_ratio_bec: need n >= 2 modes");
  const double nn = static_cast<double>(n_atoms);
  BecClassicality out;
  out.casimir = (n - 1.0) * nn * (nn + n) / (2.0 * n);
  out.delta_min = nn * (n - 1.0) / 2.0;
  out.adjoint_casimir = n;
  out.ratio = n / (nn + n);
  return out;
}

double classicality_ratio_local(int d) {
  if (d < 2)
    throw std::invalid_argument("classicality_ratio_local: need d >= 2");
  return static_cast<double>(d) / (d + 1.0);
}

TimescaleReport timescale_report(double j, const std::vector<double>& omegas,
                                 double gamma, double separation) {
  if (!(j > 0.0))
    throw std::invalid_argument("timescale_report: j must be positive");
  if (gamma < 0.0)
    throw std::invalid_argument("timescale_report: gamma must be nonnegative");
  if (omegas.empty())
    throw std::invalid_argument("timescale_report: need at least one frequency");
  for (double w : omegas)
    if (!(w > 0.0))
      throw std::invalid_argument("timescale_report: frequencies must be positive");
  if (!(separation > 1.0))
    throw std::invalid_argument("timescale_report: separation must exceed 1");

  const double inf = std::numeric_limits<double>::infinity();
  const double c_h = j * (j + 1.0);

  TimescaleReport rep;
  rep.decoherence_time = gamma > 0.0 ? 1.0 / (gamma * c_h) : inf;
  rep.relaxation_time = gamma > 0.0 ? 1.0 / (gamma * SpinRep::adjoint_casimir) : inf;
  double t_min = inf, t_max = 0.0;
  for (double w : omegas) {
    const double t = 1.0 / w;
    rep.oscillation_times.push_back(t);
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
  }
  rep.link1_factor = gamma > 0.0 ? t_min / rep.decoherence_time : 0.0;
  rep.link2_factor = gamma > 0.0 ? rep.relaxation_time / t_max : inf;
  rep.chain_satisfied = gamma > 0.0 && rep.link1_factor >= separation &&
                        rep.link2_factor >= separation;
  return rep;
}

RealizationBound realization_bound(double eps, const SpinRep& rep,
                                   const PureState& psi) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("realization_bound: eps must be positive");
  require_normalized(psi, "realization_bound");
  const std::array<double, 3> e = su2_expectations(rep, psi.view());
  const std::array<double, 3> m2 = su2_second_moments(rep, psi.view());
  RealizationBound out;
  double sum_d = 0.0, max_n = 0.0, sum_e2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d_i = m2[i] - e[i] * e[i];
    out.per_observable_n[i] = d_i / (eps * eps);
    sum_d += d_i;
    max_n = std::max(max_n, out.per_observable_n[i]);
    sum_e2 += e[i] * e[i];
  }
  out.sum_identity_check = std::abs(sum_d - (rep.casimir_value - sum_e2));
  out.n_st_bound = 3.0 * max_n;
  return out;
}

GcsParameterCount gcs_parameter_count(double num_configs) {
  if (!(num_configs >= 0.0))
    throw std::invalid_argument("gcs_parameter_count: negative count");
  return GcsParameterCount{4.0 * num_configs, 5.0 * num_configs};
}

}
