#include "kinctrl/domain.hpp"

#include <cmath>
#include <stdexcept>

#include "kinctrl/parallel.hpp"

namespace kinctrl {

GridSpec GridSpec::make(int nx, int nv, const PhaseDomain& dom) {
  if (nx < 2 || nv < 2) throw std::invalid_argument("grid needs nx, nv >= 2");
  if (!(dom.p_max > 0.0) || !(dom.v_max > 0.0)) {
    throw std::invalid_argument("domain extents must be positive");
  }
  GridSpec g;
  g.nx = nx;
  g.nv = nv;
  g.p_max = dom.p_max;
  g.v_max = dom.v_max;
  g.dx = dom.p_max / nx;
  g.dv = 2.0 * dom.v_max / nv;
  return g;
}

std::optional<Cell> GridSpec::cell_of(double x, double v) const {
  if (!(x >= 0.0 && x <= p_max)) return std::nullopt;
  if (!(v >= -v_max && v <= v_max)) return std::nullopt;
  int i = static_cast<int>(std::floor(x / dx));
  if (i >= nx) i = nx - 1;
  int j = static_cast<int>(std::floor((v + v_max) / dv));
  if (j >= nv) j = nv - 1;
  return Cell{i, j};
}

GridField deposit(const std::vector<Particle>& particles, const GridSpec& grid,
                  int step, unsigned threads) {
  const std::size_t n = particles.size();
  std::vector<GridField> partial(block_count(n));
  for_each_block(n, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    GridField local(grid.nx, grid.nv, step);
    for (std::size_t p = lo; p < hi; ++p) {
      if (auto c = grid.cell_of(particles[p].x, particles[p].v)) {
        local.at(c->i, c->j) += 1.0;
      }
    }
    partial[b] = std::move(local);
  });
  GridField out(grid.nx, grid.nv, step);
  // counts are integer-valued, so this merge is exact
  for (const GridField& f : partial) {
    for (std::size_t c = 0; c < out.values.size(); ++c) out.values[c] += f.values[c];
  }
  return out;
}

}  // namespace kinctrl
