#include "kinctrl/forward.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "kinctrl/collisions.hpp"
#include "kinctrl/dynamics.hpp"
#include "kinctrl/objective.hpp"
#include "kinctrl/parallel.hpp"
#include "kinctrl/rng.hpp"
#include "transport.hpp"

namespace kinctrl {

ForwardRun run_forward(const SimConfig& cfg, const ControlField& u,
                       ParticleEnsemble init, unsigned threads) {
  validate(cfg);
  if (init.kind != EnsembleKind::forward) {
    throw std::invalid_argument("run_forward needs a forward ensemble");
  }
  if (init.particles.empty()) {
    throw std::invalid_argument("run_forward needs a non-empty ensemble");
  }
  const GridSpec grid = cfg.grid();
  if (!u.empty()) {
    if (u.nx != grid.nx || u.nv != grid.nv) {
      throw std::invalid_argument("control grid does not match the run grid");
    }
    if (u.n_steps() < cfg.n_t) {
      throw std::invalid_argument("control covers fewer steps than the run");
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const PhaseDomain dom = cfg.domain();
  const KSParams ks = cfg.ks();
  const ForceSpec f0 = cfg.force();
  const double cap = cfg.max_substep;

  ForwardRun run;
  run.initial_count = init.particles.size();

  std::vector<Particle> parts = std::move(init.particles);
  run.snapshots.reserve(cfg.n_t + 1);
  run.histograms.reserve(cfg.n_t + 1);
  run.counts.reserve(cfg.n_t + 1);
  run.snapshots.push_back(parts);
  run.histograms.push_back(deposit(parts, grid, 0, threads));
  run.counts.push_back(parts.size());

  std::vector<std::uint8_t> alive;
  for (int k = 1; k <= cfg.n_t; ++k) {
    const int slice = k - 1;  // control is explicit in time
    const auto force = [&](double x, double v) {
      return base_force(x, f0) + control_at(u, slice, x, v, grid);
    };
    const auto collide = [&](double v, RngStream& s) -> std::optional<double> {
      return forward_postcollision(v, ks, dom.v_max, s);
    };
    const std::size_t n = parts.size();
    alive.assign(n, 0);
    std::vector<std::uint64_t> coll(block_count(n), 0);
    for_each_block(n, threads,
                   [&](std::size_t b, std::size_t lo, std::size_t hi) {
          std::uint64_t c = 0;
          for (std::size_t i = lo; i < hi; ++i) {
            RngStream s(cfg.seed, StreamPurpose::forward_step, parts[i].id,
                        static_cast<std::uint64_t>(k));
            alive[i] = detail::advance_particle(
                parts[i], cfg.dt, ks.tau, cap, dom, cfg.alpha,
                StepDirection::forward, force, collide, s, c);
          }
          coll[b] = c;
        });
    for (std::uint64_t c : coll) run.collisions += c;
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i]) parts[w++] = parts[i];
    }
    parts.resize(w);
    run.snapshots.push_back(parts);
    run.histograms.push_back(deposit(parts, grid, k, threads));
    run.counts.push_back(parts.size());
  }
  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return run;
}

double cost_estimate(const ForwardRun& run, const ControlField& u,
                     const SimConfig& cfg, unsigned threads) {
  if (run.snapshots.size() != static_cast<std::size_t>(cfg.n_t) + 1) {
    throw std::invalid_argument("run does not cover the configured horizon");
  }
  if (run.initial_count == 0) {
    throw std::invalid_argument("cost needs a run with particles");
  }
  const GridSpec grid = cfg.grid();
  const ObjectiveParams obj = cfg.objective();
  const TargetOrbit orbit = cfg.orbit();
  const double n0 = static_cast<double>(run.initial_count);
  std::optional<ThetaBar> tbar;
  if (obj.use_time_averaged_theta) tbar.emplace(obj, orbit);

  double total = 0.0;
  for (int k = 0; k < cfg.n_t; ++k) {
    const auto& snap = run.snapshots[k];
    const double t = k * cfg.dt;
    const double s = blocked_sum(snap.size(), threads, [&](std::size_t i) {
      const Point2 z{snap[i].x, snap[i].v};
      const double th = tbar ? (*tbar)(z) : theta(z, t, obj, orbit);
      const double uz = control_at(u, k, z.x, z.v, grid);
      return th + 0.5 * obj.nu * uz * uz;
    });
    total += cfg.dt * s / n0;
  }
  const auto& last = run.snapshots[cfg.n_t];
  total += blocked_sum(last.size(), threads, [&](std::size_t i) {
    return phi(Point2{last[i].x, last[i].v}, obj);
  }) / n0;
  return total;
}

}  // namespace kinctrl
