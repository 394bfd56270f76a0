#pragma once

#include <vector>

#include "kinctrl/domain.hpp"

namespace kinctrl {

struct Point2 {
  double x = 0.0;
  double v = 0.0;
};

// Reference orbit z_D(t): the F0 ellipse of the given radius around
// (x0, v0-offset), traversed with angular frequency omega.
struct TargetOrbit {
  double omega = 0.0;
  double x0 = 0.0;
  double v0 = 0.0;
  double radius = 2.5;
};

Point2 z_desired(double t, const TargetOrbit& orbit);

// Attracting Gaussian well: amplitude c, diagonal covariance (sx, sv).
// Values are <= 0 everywhere, deepest at the center.
struct GaussianWell {
  double c = 1000.0;
  double sx = 1.0;
  double sv = 1.0;
};

struct ObjectiveParams {
  GaussianWell theta_well;
  GaussianWell phi_well;
  Point2 z_terminal;
  double nu = 1.0;
  double horizon = 2.5;  // T
  int n_t = 100;
  bool use_time_averaged_theta = true;
};

double well_value(Point2 z, Point2 center, const GaussianWell& w);

// Running cost density at time t: a well that follows the orbit.
double theta(Point2 z, double t, const ObjectiveParams& obj,
             const TargetOrbit& orbit);

// Terminal cost density: a fixed well at z_terminal.
double phi(Point2 z, const ObjectiveParams& obj);

// Left-Riemann time average of theta over [0, T).  Precomputes the orbit
// samples once; evaluation is then a plain sum over n_t wells.
class ThetaBar {
 public:
  ThetaBar(const ObjectiveParams& obj, const TargetOrbit& orbit);
  double operator()(Point2 z) const;

 private:
  std::vector<Point2> centers_;
  GaussianWell well_;
};

// ThetaBar evaluated at every cell center.
GridField theta_bar_grid(const ObjectiveParams& obj, const TargetOrbit& orbit,
                         const GridSpec& grid, unsigned threads = 1);

// theta(. , t) evaluated at every cell center.
GridField theta_grid(double t, const ObjectiveParams& obj,
                     const TargetOrbit& orbit, const GridSpec& grid);

// Mean over the ensemble of the distance to the nearest sampled orbit point.
// Returns 0 for an empty ensemble.
double orbit_residual(const std::vector<Particle>& particles,
                      const TargetOrbit& orbit, int n_t, double horizon,
                      unsigned threads = 1);

}  // namespace kinctrl
