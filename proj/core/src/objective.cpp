#include "kinctrl/objective.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kinctrl/parallel.hpp"

namespace kinctrl {

Point2 z_desired(double t, const TargetOrbit& orbit) {
  const double ph = orbit.omega * t;
  return Point2{orbit.radius * std::cos(ph) + orbit.x0,
                -orbit.radius * orbit.omega * std::sin(ph) - orbit.v0};
}

double well_value(Point2 z, Point2 center, const GaussianWell& w) {
  if (!(w.sx > 0.0 && w.sv > 0.0)) {
    throw std::invalid_argument("well covariance must be positive");
  }
  const double dx = z.x - center.x;
  const double dv = z.v - center.v;
  const double quad = 0.5 * (dx * dx / w.sx + dv * dv / w.sv);
  return -w.c / (2.0 * std::numbers::pi * std::sqrt(w.sx * w.sv)) *
         std::exp(-quad);
}

double theta(Point2 z, double t, const ObjectiveParams& obj,
             const TargetOrbit& orbit) {
  return well_value(z, z_desired(t, orbit), obj.theta_well);
}

double phi(Point2 z, const ObjectiveParams& obj) {
  return well_value(z, obj.z_terminal, obj.phi_well);
}

ThetaBar::ThetaBar(const ObjectiveParams& obj, const TargetOrbit& orbit)
    : well_(obj.theta_well) {
  if (obj.n_t < 1) throw std::invalid_argument("n_t must be positive");
  centers_.reserve(obj.n_t);
  const double dt = obj.horizon / obj.n_t;
  for (int k = 0; k < obj.n_t; ++k) {
    centers_.push_back(z_desired(k * dt, orbit));
  }
}

double ThetaBar::operator()(Point2 z) const {
  double sum = 0.0;
  for (const Point2& c : centers_) sum += well_value(z, c, well_);
  return sum / static_cast<double>(centers_.size());
}

GridField theta_bar_grid(const ObjectiveParams& obj, const TargetOrbit& orbit,
                         const GridSpec& grid, unsigned threads) {
  const ThetaBar tb(obj, orbit);
  GridField out(grid.nx, grid.nv);
  for_each_block(grid.cells(), threads,
                 [&](std::size_t, std::size_t lo, std::size_t hi) {
                   for (std::size_t c = lo; c < hi; ++c) {
                     const int i = static_cast<int>(c) / grid.nv;
                     const int j = static_cast<int>(c) % grid.nv;
                     out.values[c] =
                         tb(Point2{grid.x_center(i), grid.v_center(j)});
                   }
                 });
  return out;
}

GridField theta_grid(double t, const ObjectiveParams& obj,
                     const TargetOrbit& orbit, const GridSpec& grid) {
  const Point2 center = z_desired(t, orbit);
  GridField out(grid.nx, grid.nv);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      out.at(i, j) = well_value(Point2{grid.x_center(i), grid.v_center(j)},
                                center, obj.theta_well);
    }
  }
  return out;
}

double orbit_residual(const std::vector<Particle>& particles,
                      const TargetOrbit& orbit, int n_t, double horizon,
                      unsigned threads) {
  if (particles.empty()) return 0.0;
  if (n_t < 1) throw std::invalid_argument("n_t must be positive");
  std::vector<Point2> pts(n_t);
  const double dt = horizon / n_t;
  for (int k = 0; k < n_t; ++k) pts[k] = z_desired(k * dt, orbit);
  const double sum = blocked_sum(particles.size(), threads, [&](std::size_t p) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& q : pts) {
      const double dx = particles[p].x - q.x;
      const double dv = particles[p].v - q.v;
      const double d2 = dx * dx + dv * dv;
      if (d2 < best) best = d2;
    }
    return std::sqrt(best);
  });
  return sum / static_cast<double>(particles.size());
}

}  // namespace kinctrl
