#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "kinctrl/forward.hpp"
#include "kinctrl/objective.hpp"
#include "kinctrl/rng.hpp"
#include "kinctrl/sampling.hpp"

using namespace kinctrl;

namespace {

// Narrow cloud near the force center; its energy shell keeps every particle
// inside the velocity window for the whole run.
ParticleEnsemble tight_cloud(int n, std::uint64_t seed) {
  ParticleEnsemble e;
  e.kind = EnsembleKind::forward;
  RngStream s(seed, StreamPurpose::init_forward, 0, 0);
  for (int i = 0; i < n; ++i) {
    const double x = 5.5 + sample_normal(0.0, 0.01, s);
    const double v = sample_normal(0.0, 0.01, s);
    e.particles.push_back(Particle{x, v, 0.0, 0.0, static_cast<std::uint64_t>(i)});
  }
  e.next_id = static_cast<std::uint64_t>(n);
  return e;
}

ParticleEnsemble single_particle(double x, double v) {
  ParticleEnsemble e;
  e.kind = EnsembleKind::forward;
  e.particles.push_back(Particle{x, v, 0.0, 0.0, 0});
  e.next_id = 1;
  return e;
}

ControlField constant_control(const SimConfig& cfg, double value) {
  const GridSpec g = cfg.grid();
  ControlField u;
  u.nx = g.nx;
  u.nv = g.nv;
  u.steps.assign(cfg.n_t + 1, GridField(g.nx, g.nv));
  for (int k = 0; k <= cfg.n_t; ++k) {
    u.steps[k].step = k;
    for (double& x : u.steps[k].values) x = value;
  }
  u.time_average = u.steps[0];
  return u;
}

double field_total(const GridField& f) {
  double t = 0.0;
  for (double v : f.values) t += v;
  return t;
}

}  // namespace

TEST_SUITE("forward") {

TEST_CASE("run shape and conservation without absorption") {
  SimConfig cfg;
  cfg.n_t = 5;
  cfg.dt = 0.5;  // keeps the derived oscillator gentle over the short run
  cfg.n_f = 300;
  cfg.alpha = 1.0;
  cfg.seed = 11;
  const ForwardRun run =
      run_forward(cfg, ControlField{}, tight_cloud(cfg.n_f, cfg.seed), 2);
  CHECK(run.initial_count == 300);
  REQUIRE(run.snapshots.size() == 6);
  REQUIRE(run.histograms.size() == 6);
  REQUIRE(run.counts.size() == 6);
  for (int k = 0; k <= 5; ++k) {
    CHECK(run.counts[k] == 300);  // alpha = 1 never absorbs
    CHECK(run.histograms[k].step == k);
    CHECK(field_total(run.histograms[k]) ==
          doctest::Approx(300.0).epsilon(1e-12));
  }
  CHECK(run.wall_seconds > 0.0);
}

TEST_CASE("absorbing walls only ever shrink the ensemble") {
  SimConfig cfg;
  cfg.n_t = 30;
  cfg.n_f = 2000;
  cfg.alpha = 0.3;
  cfg.seed = 12;
  auto init = init_forward_ensemble(cfg.initial_density(), cfg.n_f,
                                    cfg.domain(), cfg.seed);
  const ForwardRun run = run_forward(cfg, ControlField{}, std::move(init), 4);
  for (int k = 1; k <= cfg.n_t; ++k) {
    CHECK(run.counts[k] <= run.counts[k - 1]);
  }
  CHECK(run.counts[cfg.n_t] < run.counts[0]);
}

TEST_CASE("transport does not depend on the thread count") {
  SimConfig cfg;
  cfg.n_t = 5;
  cfg.n_f = 3000;
  cfg.seed = 13;
  auto mk = [&] {
    return init_forward_ensemble(cfg.initial_density(), cfg.n_f, cfg.domain(),
                                 cfg.seed);
  };
  const ForwardRun a = run_forward(cfg, ControlField{}, mk(), 1);
  const ForwardRun b = run_forward(cfg, ControlField{}, mk(), 4);
  CHECK(a.collisions == b.collisions);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    REQUIRE(a.snapshots[k].size() == b.snapshots[k].size());
    for (std::size_t i = 0; i < a.snapshots[k].size(); ++i) {
      CHECK(a.snapshots[k][i].x == b.snapshots[k][i].x);
      CHECK(a.snapshots[k][i].v == b.snapshots[k][i].v);
      CHECK(a.snapshots[k][i].id == b.snapshots[k][i].id);
    }
    CHECK(a.histograms[k].values == b.histograms[k].values);
  }
}

TEST_CASE("collision count tracks the free-flight rate") {
  SimConfig cfg;
  cfg.n_t = 20;
  cfg.n_f = 2000;
  cfg.alpha = 1.0;
  cfg.seed = 3;
  auto init = init_forward_ensemble(cfg.initial_density(), cfg.n_f,
                                    cfg.domain(), cfg.seed);
  const ForwardRun run = run_forward(cfg, ControlField{}, std::move(init), 4);
  // every particle draws one flight at t = 0 plus a Poisson(T/tau) renewal
  const double expected =
      cfg.n_f * (1.0 + cfg.n_t * cfg.dt / cfg.tau_eff());
  CHECK(std::abs(static_cast<double>(run.collisions) - expected) <
        0.05 * expected);
}

TEST_CASE("a zero control field acts exactly like no control") {
  SimConfig cfg;
  cfg.n_t = 4;
  cfg.n_f = 500;
  cfg.seed = 14;
  auto mk = [&] {
    return init_forward_ensemble(cfg.initial_density(), cfg.n_f, cfg.domain(),
                                 cfg.seed);
  };
  const ForwardRun a = run_forward(cfg, ControlField{}, mk(), 2);
  const ForwardRun b = run_forward(cfg, constant_control(cfg, 0.0), mk(), 2);
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    REQUIRE(a.snapshots[k].size() == b.snapshots[k].size());
    for (std::size_t i = 0; i < a.snapshots[k].size(); ++i) {
      CHECK(a.snapshots[k][i].x == b.snapshots[k][i].x);
      CHECK(a.snapshots[k][i].v == b.snapshots[k][i].v);
    }
  }
}

TEST_CASE("cost estimate matches a direct evaluation of the sums") {
  SimConfig cfg;
  cfg.n_t = 2;
  cfg.n_f = 50;
  cfg.seed = 5;
  auto init = init_forward_ensemble(cfg.initial_density(), cfg.n_f,
                                    cfg.domain(), cfg.seed);
  const ForwardRun run = run_forward(cfg, ControlField{}, std::move(init), 1);
  const ObjectiveParams obj = cfg.objective();
  const ThetaBar tb(obj, cfg.orbit());
  double expected = 0.0;
  for (int k = 0; k < cfg.n_t; ++k) {
    for (const Particle& p : run.snapshots[k]) {
      expected += cfg.dt * tb(Point2{p.x, p.v}) / cfg.n_f;
    }
  }
  for (const Particle& p : run.snapshots[cfg.n_t]) {
    expected += phi(Point2{p.x, p.v}, obj) / cfg.n_f;
  }
  CHECK(cost_estimate(run, ControlField{}, cfg) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cost estimate charges the control energy term") {
  SimConfig cfg;
  cfg.n_t = 3;
  cfg.n_f = 200;
  cfg.seed = 6;
  auto init = init_forward_ensemble(cfg.initial_density(), cfg.n_f,
                                    cfg.domain(), cfg.seed);
  const ForwardRun run = run_forward(cfg, ControlField{}, std::move(init), 1);
  const double c = 0.7;
  const double base = cost_estimate(run, ControlField{}, cfg);
  const double with_u = cost_estimate(run, constant_control(cfg, c), cfg);
  const GridSpec g = cfg.grid();
  double expected = 0.0;
  for (int k = 0; k < cfg.n_t; ++k) {
    for (const Particle& p : run.snapshots[k]) {
      if (g.cell_of(p.x, p.v)) {
        expected += cfg.dt * 0.5 * cfg.nu * c * c / cfg.n_f;
      }
    }
  }
  CHECK(with_u - base == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("collisionless run follows the reference ellipse") {
  SimConfig cfg;
  cfg.n_t = 20;
  cfg.dt = 0.125;  // one full period of the derived oscillator
  cfg.tau = 1e9;
  cfg.beta = 1e30;
  cfg.gamma = 1.0 - 1e-12;
  cfg.alpha = 1.0;
  cfg.max_substep = 1e-3;
  cfg.seed = 1;
  const TargetOrbit orbit = cfg.orbit();
  const ForwardRun run =
      run_forward(cfg, ControlField{}, single_particle(7.5, 0.0), 1);
  double worst = 0.0;
  for (int k = 0; k <= cfg.n_t; ++k) {
    REQUIRE(run.snapshots[k].size() == 1);
    const Particle& p = run.snapshots[k][0];
    const Point2 z = z_desired(k * cfg.dt, orbit);
    worst = std::max(worst, std::hypot(p.x - z.x, p.v - z.v));
  }
  CHECK(worst <= 1e-3);
  CHECK(run.collisions >= 1);
  CHECK(run.collisions <= 2);
}

TEST_CASE("bad inputs are rejected") {
  SimConfig cfg;
  cfg.n_t = 2;
  cfg.n_f = 10;

  ParticleEnsemble wrong_kind;
  wrong_kind.kind = EnsembleKind::adjoint;
  wrong_kind.particles.push_back(Particle{1, 0, 0, 0, 0});
  CHECK_THROWS_AS(run_forward(cfg, ControlField{}, std::move(wrong_kind), 1),
                  std::invalid_argument);

  ParticleEnsemble hollow;
  hollow.kind = EnsembleKind::forward;
  CHECK_THROWS_AS(run_forward(cfg, ControlField{}, std::move(hollow), 1),
                  std::invalid_argument);

  SimConfig other = cfg;
  other.n_x = 11;
  CHECK_THROWS_AS(
      run_forward(cfg, constant_control(other, 0.0), single_particle(5, 0), 1),
      std::invalid_argument);

  SimConfig shorter = cfg;
  shorter.n_t = 1;
  CHECK_THROWS_AS(
      run_forward(cfg, constant_control(shorter, 0.0), single_particle(5, 0), 1),
      std::invalid_argument);

  auto init = init_forward_ensemble(cfg.initial_density(), cfg.n_f,
                                    cfg.domain(), cfg.seed);
  const ForwardRun run = run_forward(cfg, ControlField{}, std::move(init), 1);
  SimConfig longer = cfg;
  longer.n_t = 3;
  CHECK_THROWS_AS(cost_estimate(run, ControlField{}, longer),
                  std::invalid_argument);
}

}  // TEST_SUITE
