// Pure-state vector in the |j,m> basis.
#pragma once

#include <span>
#include <vector>

#include "dcg/matrix.hpp"

namespace dcg {

struct PureState {
  std::vector<cplx> amp;

  int dim() const { return static_cast<int>(amp.size()); }
  double norm() const;
  void normalize();

  std::span<const cplx> view() const { return amp; }
  std::span<cplx> view() { return amp; }
};

cplx inner(const PureState& a, const PureState& b);

// |<a|b>|^2 for normalized states.
double fidelity(const PureState& a, const PureState& b);

}
