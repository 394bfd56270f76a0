#include "kinctrl/control.hpp"

#include <stdexcept>

namespace kinctrl {

GridField velocity_gradient(const GridField& q, double dv) {
  if (!(dv > 0.0)) throw std::invalid_argument("dv must be positive");
  if (q.nv < 2) throw std::invalid_argument("need at least two velocity cells");
  GridField g(q.nx, q.nv, q.step);
  const double inv2 = 1.0 / (2.0 * dv);
  const double inv = 1.0 / dv;
  for (int i = 0; i < q.nx; ++i) {
    g.at(i, 0) = (q.at(i, 1) - q.at(i, 0)) * inv;
    for (int j = 1; j < q.nv - 1; ++j) {
      g.at(i, j) = (q.at(i, j + 1) - q.at(i, j - 1)) * inv2;
    }
    g.at(i, q.nv - 1) = (q.at(i, q.nv - 1) - q.at(i, q.nv - 2)) * inv;
  }
  return g;
}

GridField extract_control(const GridField& q_tilde, double nu, double dv) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  GridField u = velocity_gradient(q_tilde, dv);
  for (double& x : u.values) x /= nu;
  return u;
}

double control_at(const ControlField& u, int k, double x, double v,
                  const GridSpec& grid) {
  if (u.empty()) return 0.0;
  if (k < 0 || k > u.n_steps()) throw std::out_of_range("control step index");
  const auto c = grid.cell_of(x, v);
  if (!c) return 0.0;
  return u.steps[k].at(c->i, c->j);
}

GridField time_average_control(const ControlField& u) {
  if (u.empty()) throw std::invalid_argument("cannot average an empty control");
  GridField mean(u.nx, u.nv);
  for (const GridField& s : u.steps) {
    for (std::size_t c = 0; c < mean.values.size(); ++c) {
      mean.values[c] += s.values[c];
    }
  }
  const double inv = 1.0 / static_cast<double>(u.steps.size());
  for (double& x : mean.values) x *= inv;
  return mean;
}

ControlField broadcast_time_average(const ControlField& u) {
  ControlField out;
  out.nx = u.nx;
  out.nv = u.nv;
  out.time_average = time_average_control(u);
  out.steps.assign(u.steps.size(), out.time_average);
  for (std::size_t k = 0; k < out.steps.size(); ++k) {
    out.steps[k].step = static_cast<int>(k);
  }
  return out;
}

}  // namespace kinctrl
