#include "dcg/coherent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcg {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double lchoose(int n, int r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

// sinh(mu)/mu, stable at small |mu|.
cplx sinhc(cplx mu) {
  if (std::abs(mu) < 1e-4) {
    const cplx mu2 = mu * mu;
    return 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
  }
  return std::sinh(mu) / mu;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}

CoherentParam make_coherent_param(cplx u, cplx v) {
  if (!finite(u) || !finite(v))
    throw std::invalid_argument("make_coherent_param: nonfinite component");
  const double n = std::hypot(std::abs(u), std::abs(v));
  if (!(n > 0.0))
    throw std::invalid_argument("make_coherent_param: zero pair");
  return CoherentParam{u / n, v / n};
}

CoherentParam coherent_from_tau(cplx tau) {
  if (!finite(tau))
    throw std::invalid_argument("coherent_from_tau: nonfinite tau");
  const double n = std::hypot(1.0, std::abs(tau));
  return CoherentParam{1.0 / n, tau / n};
}

double projective_mismatch(const CoherentParam& p1, const CoherentParam& p2) {
  const cplx z = std::conj(p1.u) * p2.u + std::conj(p1.v) * p2.v;
  return 1.0 - std::abs(z);
}

PureState coherent_amplitudes(const SpinRep& rep, const CoherentParam& p) {
  const int n = rep.dim;
  const int two_j = rep.two_j;
  PureState psi;
  psi.amp.assign(n, cplx(0.0, 0.0));

  const double au = std::abs(p.u);
  const double av = std::abs(p.v);
  if (av == 0.0) {
    psi.amp[0] = std::polar(1.0, two_j * std::arg(p.u));
    return psi;
  }
  if (au == 0.0) {
    psi.amp[n - 1] = std::polar(1.0, two_j * std::arg(p.v));
    return psi;
  }

  const double lu = std::log(au);
  const double lv = std::log(av);
  const double pu = std::arg(p.u);
  const double pv = std::arg(p.v);

  std::vector<double> logmag(n);
  double peak = -1e300;
  for (int r = 0; r < n; ++r) {
    logmag[r] = 0.5 * lchoose(two_j, r) + (two_j - r) * lu + r * lv;
    peak = std::max(peak, logmag[r]);
  }
  double norm_sq = 0.0;
  for (int r = 0; r < n; ++r) {
    const double mag = std::exp(logmag[r] - peak);
    psi.amp[r] = std::polar(mag, (two_j - r) * pu + r * pv);
    norm_sq += mag * mag;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (int r = 0; r < n; ++r) psi.amp[r] *= inv;
  return psi;
}

cplx coherent_overlap(const CoherentParam& p1, const CoherentParam& p2,
                      double j) {
  const int two_j = static_cast<int>(std::lround(2.0 * j));
  const cplx z = std::conj(p1.u) * p2.u + std::conj(p1.v) * p2.v;
  if (z == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
  // Integer power, so the log branch drops out.
  return std::exp(static_cast<double>(two_j) * std::log(z));
}

std::array<double, 3> coherent_expectations(const CoherentParam& p, double j) {
  // Per-qubit Bloch vector of (u, v) with u on m = -1/2: the y component is
  // -Im(conj(u) v), not +; the 2j-fold symmetric power scales it by 2j.
  const cplx uv = std::conj(p.u) * p.v;
  return {2.0 * j * uv.real(), -2.0 * j * uv.imag(),
          j * (std::norm(p.v) - std::norm(p.u))};
}

GroupActionResult nonunitary_group_action(const CoherentParam& p,
                                          const std::array<cplx, 3>& c,
                                          double j) {
  for (const cplx& ci : c)
    if (!finite(ci))
      throw std::invalid_argument("nonunitary_group_action: nonfinite coefficient");

  // Fundamental image of cx Jx + cy Jy + cz Jz in the m-ascending basis.
  const cplx a00 = -0.5 * c[2];
  const cplx a01 = 0.5 * (c[0] + cplx(0.0, 1.0) * c[1]);
  const cplx a10 = 0.5 * (c[0] - cplx(0.0, 1.0) * c[1]);
  const cplx a11 = 0.5 * c[2];

  // A is traceless with A^2 = mu^2 I, so exp(A) = cosh(mu) + sinhc(mu) A.
  const cplx mu = 0.5 * std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  const cplx ch = std::cosh(mu);
  const cplx sc = sinhc(mu);

  const cplx up = (ch + sc * a00) * p.u + sc * a01 * p.v;
  const cplx vp = sc * a10 * p.u + (ch + sc * a11) * p.v;
  const double s = std::hypot(std::abs(up), std::abs(vp));
  if (!std::isfinite(s) || !(s > 0.0) || !finite(up) || !finite(vp))
    throw std::invalid_argument(
        "nonunitary_group_action: overflow in group factor, step size too large");

  const double log_factor = 2.0 * j * std::log(s);
  if (!std::isfinite(log_factor))
    throw std::invalid_argument(
        "nonunitary_group_action: log factor out of range, step size too large");
  return GroupActionResult{CoherentParam{up / s, vp / s}, log_factor};
}

double resolution_check(double j, int order) {
  if (order < 1) throw std::invalid_argument("resolution_check: order must be >= 1");
  const SpinRep rep = build_spin_rep(j);
  const int n = rep.dim;

  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const int n_phi = 2 * order - 1;

  ComplexMatrix acc(n);
  for (int k = 0; k < order; ++k) {
    const double u = std::sqrt(0.5 * (1.0 + x[k]));
    const double sv = std::sqrt(0.5 * (1.0 - x[k]));
    for (int l = 0; l < n_phi; ++l) {
      const double phi = 2.0 * std::numbers::pi * l / n_phi;
      const CoherentParam p = make_coherent_param(u, std::polar(sv, phi));
      const PureState psi = coherent_amplitudes(rep, p);
      const double weight = (rep.two_j + 1.0) * w[k] / (2.0 * n_phi);
      for (int r = 0; r < n; ++r) {
        const cplx wr = weight * psi.amp[r];
        for (int s = 0; s < n; ++s) acc(r, s) += wr * std::conj(psi.amp[s]);
      }
    }
  }
  return max_abs_diff(acc, ComplexMatrix::identity(n));
}

double estimate_num_configs(double purity, double j) {
  if (!std::isfinite(purity) || purity <= 0.0 || purity > 1.0)
    throw std::invalid_argument(
        "estimate_num_configs: purity must lie in (0, 1]");
  if (!(j > 0.0))
    throw std::invalid_argument("estimate_num_configs: j must be positive");
  return (2.0 * j + 1.0) * (1.0 - std::sqrt(purity));
}

}
