#pragma once

#include <algorithm>
#include <cstdint>

#include "kinctrl/domain.hpp"
#include "kinctrl/dynamics.hpp"
#include "kinctrl/sampling.hpp"

namespace kinctrl::detail {

// Advance one particle through a whole macro-step of length dt as a chain of
// free-flight segments.  A particle with no unexpired flight collides first,
// then draws the next flight (collide-then-fly); max_substep > 0 additionally
// splits long flights into capped integrator segments without extra
// collisions.  Returns false when the particle is removed, either by the
// collision itself (collide returned nothing) or by wall absorption.
//
// Draw order per particle and macro-step: for each collision the collide
// draws, then one flight draw; one survival draw per wall crossing.
template <class Force, class Collide, class Stream>
bool advance_particle(Particle& p, double dt, double tau_flight, double cap,
                      const PhaseDomain& dom, double alpha, StepDirection dir,
                      Force&& force, Collide&& collide, Stream& s,
                      std::uint64_t& collisions) {
  double t_left = dt;
  while (t_left > 0.0) {
    if (p.flight_remaining <= 0.0) {
      ++collisions;
      const auto w = collide(p.v, s);
      if (!w) return false;
      p.v = *w;
      p.flight_remaining = free_flight_time(tau_flight, s);
    }
    double step = std::min(p.flight_remaining, t_left);
    if (cap > 0.0) step = std::min(step, cap);
    verlet_substep(p, step, force, dir);
    const BoundaryOutcome b = apply_boundary(p.x, p.v, dom, alpha, s);
    if (b.absorbed) return false;
    p.x = b.x;
    p.v = b.v;
    p.flight_remaining -= step;
    p.t_elapsed += step;
    t_left -= step;
  }
  return true;
}

}  // namespace kinctrl::detail
