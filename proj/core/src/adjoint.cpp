#include "kinctrl/adjoint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinctrl/collisions.hpp"
#include "kinctrl/denoise.hpp"
#include "kinctrl/dynamics.hpp"
#include "kinctrl/objective.hpp"
#include "kinctrl/parallel.hpp"
#include "kinctrl/rng.hpp"
#include "kinctrl/sampling.hpp"
#include "transport.hpp"

namespace kinctrl {

std::size_t source_injection(ParticleEnsemble& ens, const GridField& q_tilde,
                             const GridField& theta_field, double nu,
                             const GridSpec& grid, std::uint64_t seed, int k,
                             unsigned threads) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (q_tilde.nx != grid.nx || q_tilde.nv != grid.nv ||
      theta_field.nx != grid.nx || theta_field.nv != grid.nv) {
    throw std::invalid_argument("field dimensions do not match the grid");
  }
  const GridField grad = velocity_gradient(q_tilde, grid.dv);
  const std::size_t ncells = grid.cells();

  // Counts are a pure function of the fields; draws only place the particles.
  std::vector<std::size_t> want(ncells, 0);
  for (int i = 0; i + 1 < grid.nx; ++i) {
    for (int j = 0; j + 1 < grid.nv; ++j) {
      const double g = grad.at(i, j);
      const double val = -theta_field.at(i, j) - g * g / (2.0 * nu);
      if (val >= 1.0) {
        want[grid.flat(i, j)] = static_cast<std::size_t>(std::floor(val));
      }
    }
  }
  std::vector<std::size_t> offset(ncells + 1, 0);
  for (std::size_t c = 0; c < ncells; ++c) offset[c + 1] = offset[c] + want[c];
  const std::size_t total = offset[ncells];
  if (total == 0) return 0;

  const std::size_t base = ens.particles.size();
  const std::uint64_t id0 = ens.next_id;
  ens.particles.resize(base + total);
  for_each_block(ncells, threads,
                 [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
          if (want[c] == 0) continue;
          const int i = static_cast<int>(c / grid.nv);
          const int j = static_cast<int>(c % grid.nv);
          RngStream s(seed, StreamPurpose::source_injection, c,
                      static_cast<std::uint64_t>(k));
          const double x0 = i * grid.dx;
          const double x1 = (i + 1) * grid.dx;
          const double v0 = j * grid.dv - grid.v_max;
          const double v1 = (j + 1) * grid.dv - grid.v_max;
          for (std::size_t t = 0; t < want[c]; ++t) {
            Particle p;
            p.x = sample_uniform(x0, x1, s);
            p.v = sample_uniform(v0, v1, s);
            p.id = id0 + offset[c] + t;
            ens.particles[base + offset[c] + t] = p;
          }
        }
      });
  ens.next_id += total;
  return total;
}

std::size_t reaction_amplify(ParticleEnsemble& ens, double growth,
                             std::uint64_t seed, int k, unsigned threads) {
  if (!(growth >= 0.0)) {
    throw std::invalid_argument("growth must be non-negative");
  }
  const std::size_t n = ens.particles.size();
  const auto whole = static_cast<std::size_t>(std::floor(growth));
  const double eps = growth - static_cast<double>(whole);

  std::vector<std::size_t> clones(n, 0);
  for_each_block(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream s(seed, StreamPurpose::reaction, ens.particles[i].id,
                  static_cast<std::uint64_t>(k));
      clones[i] = whole + (s.u01() < eps ? 1 : 0);
    }
  });
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + clones[i];
  const std::size_t total = offset[n];
  if (total == 0) return 0;

  const std::uint64_t id0 = ens.next_id;
  ens.particles.resize(n + total);
  for_each_block(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t t = 0; t < clones[i]; ++t) {
        Particle c = ens.particles[i];  // keeps the unexpired flight
        c.id = id0 + offset[i] + t;
        ens.particles[n + offset[i] + t] = c;
      }
    }
  });
  ens.next_id += total;
  return total;
}

AdjointRun run_adjoint_oneshot(const SimConfig& cfg, unsigned threads) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const GridSpec grid = cfg.grid();
  const PhaseDomain dom = cfg.domain();
  const KSParams ks = cfg.ks();
  const ForceSpec f0 = cfg.force();
  const ObjectiveParams obj = cfg.objective();
  const TargetOrbit orbit = cfg.orbit();
  const Point2 zt = cfg.z_terminal();
  const int nt = cfg.n_t;
  const StepDirection dir =
      cfg.adjoint_characteristics == AdjointCharacteristics::force_negated
          ? StepDirection::adjoint
          : StepDirection::adjoint_reversed;
  const double growth = cfg.dt * c_star_0(ks);

  AdjointRun run;
  run.control.nx = grid.nx;
  run.control.nv = grid.nv;
  run.control.steps.assign(nt + 1, GridField(grid.nx, grid.nv));
  run.q_raw.assign(nt + 1, GridField());
  run.q_denoised.assign(nt + 1, GridField());
  run.counts.assign(nt + 1, 0);

  ParticleEnsemble ens =
      init_adjoint_ensemble(zt.x, zt.v, cfg.sigma_phi_x, cfg.sigma_phi_v,
                            cfg.n_q_terminal, dom, cfg.seed, threads);
  run.peak_particles = ens.particles.size();

  GridField theta_bar;
  if (cfg.use_time_averaged_theta) {
    theta_bar = theta_bar_grid(obj, orbit, grid, threads);
  }

  const auto process_slice = [&](int k) {
    if (ens.particles.empty()) {
      throw std::runtime_error("adjoint ensemble died out at step " +
                               std::to_string(k));
    }
    run.counts[k] = ens.particles.size();
    run.q_raw[k] = deposit(ens.particles, grid, k, threads);
    run.q_denoised[k] = denoise_field(run.q_raw[k], cfg.c_s, grid.dv, threads);
    run.control.steps[k] = extract_control(run.q_denoised[k], cfg.nu, grid.dv);
  };

  for (int k = nt; k >= 1; --k) {
    process_slice(k);

    GridField theta_step;
    const GridField* theta_k = &theta_bar;
    if (!cfg.use_time_averaged_theta) {
      theta_step = theta_grid(k * cfg.dt, obj, orbit, grid);
      theta_k = &theta_step;
    }
    run.injected += source_injection(ens, run.q_denoised[k], *theta_k, cfg.nu,
                                     grid, cfg.seed, k, threads);
    run.cloned += reaction_amplify(ens, growth, cfg.seed, k, threads);
    run.peak_particles = std::max(run.peak_particles, ens.particles.size());
    if (cfg.max_adjoint_particles > 0 &&
        ens.particles.size() > cfg.max_adjoint_particles) {
      throw std::runtime_error("adjoint ensemble exceeded the particle cap (" +
                               std::to_string(ens.particles.size()) +
                               ") at step " + std::to_string(k));
    }

    const GridField& uk = run.control.steps[k];
    const auto force = [&](double x, double v) {
      double f = base_force(x, f0);
      if (const auto c = grid.cell_of(x, v)) f += uk.at(c->i, c->j);
      return f;
    };
    const std::size_t n = ens.particles.size();
    std::vector<std::uint8_t> alive(n, 0);
    std::vector<std::uint64_t> coll(block_count(n), 0);
    std::vector<std::uint64_t> vrem(block_count(n), 0);
    for_each_block(n, threads,
                   [&](std::size_t b, std::size_t lo, std::size_t hi) {
          std::uint64_t c = 0;
          std::uint64_t r = 0;
          const auto collide = [&](double v, RngStream& s) {
            auto w = adjoint_postcollision(v, ks, dom.v_max, s);
            if (!w) ++r;
            return w;
          };
          for (std::size_t i = lo; i < hi; ++i) {
            RngStream s(cfg.seed, StreamPurpose::adjoint_step,
                        ens.particles[i].id, static_cast<std::uint64_t>(k));
            alive[i] = detail::advance_particle(
                ens.particles[i], cfg.dt, ks.tau_adjoint(), cfg.max_substep,
                dom, cfg.alpha, dir, force, collide, s, c);
          }
          coll[b] = c;
          vrem[b] = r;
        });
    std::uint64_t vr = 0;
    for (const auto x : vrem) vr += x;
    for (const auto x : coll) run.collisions += x;
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i]) ens.particles[w++] = ens.particles[i];
    }
    ens.particles.resize(w);
    run.removed_velocity += vr;
    run.absorbed += static_cast<std::uint64_t>(n - w) - vr;
  }
  process_slice(0);
  run.control.time_average = time_average_control(run.control);
  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return run;
}

}  // namespace kinctrl
