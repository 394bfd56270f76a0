#pragma once

#include <cstdint>
#include <vector>

#include "kinctrl/config.hpp"
#include "kinctrl/control.hpp"
#include "kinctrl/domain.hpp"

namespace kinctrl {

// Trajectory record of a physical run: per-step survivors, their histograms,
// and headline statistics.  Index k = 0..n_t covers t = k dt.
struct ForwardRun {
  std::vector<std::vector<Particle>> snapshots;
  std::vector<GridField> histograms;
  std::vector<std::size_t> counts;
  std::uint64_t collisions = 0;
  std::size_t initial_count = 0;
  double wall_seconds = 0.0;
};

// Evolve the ensemble through n_t macro-steps under the force
// F0 + u, with free-flight collisions and absorbing/reflecting walls.
// u may be empty (zero control).  Per-particle RNG substreams keyed by
// (seed, particle, step) make the result independent of thread count.
ForwardRun run_forward(const SimConfig& cfg, const ControlField& u,
                       ParticleEnsemble init, unsigned threads = 1);

// Monte Carlo estimate of the cost functional from a recorded run: running
// term summed over steps 0..n_t-1 plus the terminal term, both normalized by
// the initial particle count.  Absorbed particles contribute while alive.
double cost_estimate(const ForwardRun& run, const ControlField& u,
                     const SimConfig& cfg, unsigned threads = 1);

}  // namespace kinctrl
