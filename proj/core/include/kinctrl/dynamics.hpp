#pragma once

#include <cmath>
#include <stdexcept>

#include "kinctrl/domain.hpp"

namespace kinctrl {

// Restoring force F0(x) = -omega^2 (x - center); its orbits are the target
// ellipses in phase space.
struct ForceSpec {
  double omega = 0.0;
  double center = 0.0;
};

inline double base_force(double x, const ForceSpec& f) {
  return -f.omega * f.omega * (x - f.center);
}

enum class StepDirection {
  forward,           // dx = +v dt, dv = +F dt
  adjoint,           // dx = +v dt, dv = -F dt
  adjoint_reversed,  // dx = -v dt, dv = -F dt (fully reversed characteristics)
};

// One symplectic velocity-Verlet sub-step (half-kick, drift, half-kick).
// force is any callable double(double x, double v).
template <class Force>
void verlet_substep(Particle& p, double dt1, Force&& force, StepDirection dir) {
  if (dt1 < 0.0) throw std::invalid_argument("negative sub-step");
  if (dt1 == 0.0) return;
  const double fsign = (dir == StepDirection::forward) ? 1.0 : -1.0;
  const double xsign = (dir == StepDirection::adjoint_reversed) ? -1.0 : 1.0;
  const double half = 0.5 * dt1;
  const double vh = p.v + fsign * force(p.x, p.v) * half;
  const double xn = p.x + xsign * vh * dt1;
  p.x = xn;
  p.v = vh + fsign * force(xn, vh) * half;
}

struct BoundaryOutcome {
  bool absorbed = false;
  double x = 0.0;
  double v = 0.0;
  int folds = 0;
};

// Wall treatment for a tentative position. Survival is decided by a single
// draw per boundary event (survive with probability alpha), then the state
// is specularly folded back into [0, p_max], flipping v once per fold.
// No draw is consumed when the position is already inside.
template <class Stream>
BoundaryOutcome apply_boundary(double x, double v, const PhaseDomain& dom,
                               double alpha, Stream& s) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  BoundaryOutcome out{false, x, v, 0};
  if (x >= 0.0 && x <= dom.p_max) return out;
  if (!std::isfinite(x)) throw std::runtime_error("non-finite position at wall");
  if (s.u01() > alpha) {
    out.absorbed = true;
    return out;
  }
  while (out.x < 0.0 || out.x > dom.p_max) {
    if (out.x < 0.0) {
      out.x = -out.x;
    } else {
      out.x = 2.0 * dom.p_max - out.x;
    }
    out.v = -out.v;
    ++out.folds;
  }
  return out;
}

}  // namespace kinctrl
