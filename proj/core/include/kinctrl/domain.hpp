#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace kinctrl {

// Phase-space window [0, p_max] x [-v_max, v_max].
struct PhaseDomain {
  double p_max = 10.0;
  double v_max = 5.0;
};

struct Cell {
  int i = 0;
  int j = 0;
  bool operator==(const Cell&) const = default;
};

// Uniform cell-centered grid over the phase-space window.  Indices are
// 0-based; cell (i, j) is centered at ((i+1/2)dx, (j+1/2)dv - v_max).
struct GridSpec {
  int nx = 0;
  int nv = 0;
  double dx = 0.0;
  double dv = 0.0;
  double p_max = 0.0;
  double v_max = 0.0;

  static GridSpec make(int nx, int nv, const PhaseDomain& dom);

  double x_center(int i) const { return (i + 0.5) * dx; }
  double v_center(int j) const { return (j + 0.5) * dv - v_max; }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * nv; }
  std::size_t flat(int i, int j) const {
    return static_cast<std::size_t>(i) * nv + j;
  }

  // Points outside the window map to nothing.  A point exactly on an interior
  // cell edge belongs to the higher-index cell; x = p_max and v = v_max fall
  // into the last cell.
  std::optional<Cell> cell_of(double x, double v) const;
};

struct Particle {
  double x = 0.0;
  double v = 0.0;
  double t_elapsed = 0.0;         // sub-step clock, carried across macro-steps
  double flight_remaining = 0.0;  // unexpired free flight, 0 = draw a new one
  std::uint64_t id = 0;           // stable identity, keys the RNG substream
};

enum class EnsembleKind { forward, adjoint };

struct ParticleEnsemble {
  EnsembleKind kind = EnsembleKind::forward;
  std::vector<Particle> particles;
  std::uint64_t next_id = 0;  // first id not yet assigned
};

// Cell-indexed scalar field tagged with the timestep it belongs to.
struct GridField {
  int nx = 0;
  int nv = 0;
  int step = 0;
  std::vector<double> values;

  GridField() = default;
  GridField(int nx_, int nv_, int step_ = 0)
      : nx(nx_), nv(nv_), step(step_),
        values(static_cast<std::size_t>(nx_) * nv_, 0.0) {}

  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * nv + j]; }
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * nv + j];
  }
};

// Histogram of raw per-cell particle counts; no volume normalization.
// Particles outside the window contribute nothing.
GridField deposit(const std::vector<Particle>& particles, const GridSpec& grid,
                  int step, unsigned threads = 1);

}  // namespace kinctrl
