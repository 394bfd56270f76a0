#pragma once

#include <vector>

#include "kinctrl/domain.hpp"

namespace kinctrl {

// Per-timestep control values on the grid plus their time average.
// steps has n_t + 1 slices (k = 0..n_t).  A default-constructed field is the
// zero control.
struct ControlField {
  int nx = 0;
  int nv = 0;
  std::vector<GridField> steps;
  GridField time_average;

  bool empty() const { return steps.empty(); }
  int n_steps() const {
    return steps.empty() ? 0 : static_cast<int>(steps.size()) - 1;
  }
};

// Finite-difference velocity gradient of a field: central differences in the
// interior, one-sided at the first and last velocity rows.
GridField velocity_gradient(const GridField& q, double dv);

// Control slice from a smoothed field: (1/nu) d/dv q_tilde.
GridField extract_control(const GridField& q_tilde, double nu, double dv);

// Piecewise-constant lookup of the control acting on a phase point at step k;
// zero outside the window.
double control_at(const ControlField& u, int k, double x, double v,
                  const GridSpec& grid);

// Pointwise mean of all n_t + 1 slices.
GridField time_average_control(const ControlField& u);

// A field whose every slice is the time average of the input (same shape).
ControlField broadcast_time_average(const ControlField& u);

}  // namespace kinctrl
