#pragma once

#include <cstdint>
#include <vector>

#include "kinctrl/config.hpp"
#include "kinctrl/control.hpp"
#include "kinctrl/domain.hpp"

namespace kinctrl {

// Everything the one-shot backward solve produces: the control field itself
// plus the per-step particle histograms it was extracted from and counters
// describing how the ensemble evolved.
struct AdjointRun {
  ControlField control;
  std::vector<GridField> q_raw;       // deposited histograms, k = 0..n_t
  std::vector<GridField> q_denoised;  // after smoothing
  std::vector<std::size_t> counts;    // ensemble size at each deposit
  std::uint64_t injected = 0;
  std::uint64_t cloned = 0;
  std::uint64_t collisions = 0;
  std::uint64_t removed_velocity = 0;  // collision landed outside the window
  std::uint64_t absorbed = 0;          // lost at a wall
  std::size_t peak_particles = 0;
  double wall_seconds = 0.0;
};

// Add source particles cell by cell.  Each interior cell (i <= nx-2,
// j <= nv-2) receives floor(-theta_c - |d_v q_tilde|^2 / (2 nu)) particles
// when that number is positive, placed uniformly inside the cell.  Draws and
// ids are keyed per (cell, k), so the result is thread-count independent.
// Returns the number of particles added.
std::size_t source_injection(ParticleEnsemble& ens, const GridField& q_tilde,
                             const GridField& theta_field, double nu,
                             const GridSpec& grid, std::uint64_t seed, int k,
                             unsigned threads = 1);

// Zeroth-order gain term: every particle spawns floor(growth) clones plus one
// more with probability frac(growth).  Exactly one Bernoulli draw per source
// particle, keyed by (id, k).  Clones inherit the full kinematic state and
// get fresh ids.  Returns the number of clones added.
std::size_t reaction_amplify(ParticleEnsemble& ens, double growth,
                             std::uint64_t seed, int k, unsigned threads = 1);

// Solve the backward problem once and extract the control at every step.
// Walks k = n_t..0; at each k deposits the ensemble, smooths, differentiates,
// then (for k >= 1) injects sources, applies the gain, and transports the
// ensemble one step back.  Throws if the ensemble ever dies out or outgrows
// cfg.max_adjoint_particles.
AdjointRun run_adjoint_oneshot(const SimConfig& cfg, unsigned threads = 1);

}  // namespace kinctrl
