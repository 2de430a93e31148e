#include "dcg/state.hpp"

#include <cmath>
#include <stdexcept>

namespace dcg {

double PureState::norm() const {
  double s = 0.0;
  for (const cplx& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

void PureState::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::runtime_error("PureState::normalize: vanishing or nonfinite norm");
  for (cplx& a : amp) a /= n;
}

cplx inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner: dimension mismatch");
  cplx s(0.0, 0.0);
  for (int r = 0; r < a.dim(); ++r) s += std::conj(a.amp[r]) * b.amp[r];
  return s;
}

double fidelity(const PureState& a, const PureState& b) {
  return std::norm(inner(a, b));
}

}
