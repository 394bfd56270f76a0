#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "doctest.h"
#include "kinctrl/dynamics.hpp"
#include "kinctrl/rng.hpp"
#include "test_util.hpp"
#include "transport.hpp"

using namespace kinctrl;
using kinctrl::testing::FakeStream;

namespace {

const double omega = 2.0 * std::numbers::pi / 2.5;

double harmonic(double x, double /*v*/) {
  return base_force(x, ForceSpec{omega, 5.0});
}

double energy(const Particle& p) {
  const double d = p.x - 5.0;
  return 0.5 * p.v * p.v + 0.5 * omega * omega * d * d;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("base force oracle values") {
  const ForceSpec f{omega, 5.0};
  CHECK(omega == doctest::Approx(2.5132741228718345).epsilon(1e-15));
  CHECK(base_force(7.5, f) ==
        doctest::Approx(-15.791367041742973).epsilon(1e-14));
  CHECK(base_force(5.0, f) == 0.0);
}

TEST_CASE("verlet guards the step size") {
  Particle p{1.0, 2.0, 0, 0, 0};
  CHECK_THROWS_AS(verlet_substep(p, -0.1, harmonic, StepDirection::forward),
                  std::invalid_argument);
  verlet_substep(p, 0.0, harmonic, StepDirection::forward);
  CHECK(p.x == 1.0);
  CHECK(p.v == 2.0);
}

TEST_CASE("forward verlet keeps the oscillator energy bounded") {
  Particle p{7.5, 0.0, 0, 0, 0};
  const double e0 = energy(p);
  const double h = 1e-3;
  for (int i = 0; i < 2500; ++i) {
    verlet_substep(p, h, harmonic, StepDirection::forward);
    CHECK(std::abs(energy(p) - e0) / e0 < 1e-5);
  }
  // one full period returns close to the start
  CHECK(std::abs(p.x - 7.5) < 1e-4);
  CHECK(std::abs(p.v) < 1e-4);
}

TEST_CASE("reversed stepping inverts forward stepping exactly") {
  Particle p{6.3, -1.7, 0, 0, 0};
  const Particle start = p;
  const double h = 0.01;
  for (int i = 0; i < 100; ++i) {
    verlet_substep(p, h, harmonic, StepDirection::forward);
  }
  for (int i = 0; i < 100; ++i) {
    verlet_substep(p, h, harmonic, StepDirection::adjoint_reversed);
  }
  CHECK(p.x == doctest::Approx(start.x).epsilon(1e-10));
  CHECK(p.v == doctest::Approx(start.v).epsilon(1e-10));
}

TEST_CASE("plain adjoint stepping is the hyperbolic companion flow") {
  Particle p{7.5, 0.0, 0, 0, 0};
  verlet_substep(p, 0.01, harmonic, StepDirection::adjoint);
  // dv = -F dt with F < 0 here, so both coordinates move outward
  CHECK(p.x > 7.5);
  CHECK(p.v > 0.0);
}

TEST_CASE("boundary leaves interior states alone without a draw") {
  FakeStream s({});  // a draw would throw
  const auto out = apply_boundary(3.0, -2.0, PhaseDomain{10.0, 5.0}, 0.5, s);
  CHECK_FALSE(out.absorbed);
  CHECK(out.x == 3.0);
  CHECK(out.v == -2.0);
  CHECK(out.folds == 0);
}

TEST_CASE("single fold cases are exact") {
  const PhaseDomain dom{10.0, 5.0};
  FakeStream s({0.2});
  auto out = apply_boundary(-0.3, -2.0, dom, 0.5, s);
  CHECK_FALSE(out.absorbed);
  CHECK(out.x == 0.3);
  CHECK(out.v == 2.0);
  CHECK(out.folds == 1);

  FakeStream t({0.9});
  out = apply_boundary(10.4, 3.0, dom, 1.0, t);
  CHECK_FALSE(out.absorbed);
  CHECK(out.x == 9.6);
  CHECK(out.v == -3.0);
  CHECK(out.folds == 1);
}

TEST_CASE("double fold returns through both walls") {
  FakeStream s({0.0});
  const auto out = apply_boundary(20.4, 3.0, PhaseDomain{10.0, 5.0}, 1.0, s);
  CHECK_FALSE(out.absorbed);
  CHECK(out.x == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(out.v == 3.0);  // flipped twice
  CHECK(out.folds == 2);
}

TEST_CASE("absorption consumes exactly one draw") {
  FakeStream s({0.7});
  const auto out = apply_boundary(-0.3, -2.0, PhaseDomain{10.0, 5.0}, 0.5, s);
  CHECK(out.absorbed);
  CHECK(s.consumed() == 1);
}

TEST_CASE("alpha bounds are enforced and bad states rejected") {
  FakeStream s({0.5, 0.5});
  CHECK_THROWS_AS(apply_boundary(-1.0, 0.0, PhaseDomain{}, -0.1, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_boundary(-1.0, 0.0, PhaseDomain{}, 1.1, s),
                  std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(apply_boundary(inf, 0.0, PhaseDomain{}, 0.5, s),
                  std::runtime_error);
}

TEST_CASE("advance through a pre-assigned flight is a pure drift") {
  Particle p{2.0, 1.0, 0.0, 1e9, 0};
  FakeStream s({});  // neither collision nor wall draws may happen
  std::uint64_t coll = 0;
  const bool ok = detail::advance_particle(
      p, 1.0, 1.0, 0.0, PhaseDomain{10.0, 5.0}, 0.5, StepDirection::forward,
      [](double, double) { return 0.0; },
      [](double v, FakeStream&) { return std::optional<double>(v); }, s, coll);
  CHECK(ok);
  CHECK(coll == 0);
  CHECK(p.x == 3.0);
  CHECK(p.v == 1.0);
  CHECK(p.flight_remaining == doctest::Approx(1e9 - 1.0));
  CHECK(p.t_elapsed == 1.0);
}

TEST_CASE("the sub-step cap splits a flight without extra collisions") {
  Particle p{2.0, 1.0, 0.0, 1e9, 0};
  FakeStream s({});
  std::uint64_t coll = 0;
  const bool ok = detail::advance_particle(
      p, 1.0, 1.0, 0.3, PhaseDomain{10.0, 5.0}, 0.5, StepDirection::forward,
      [](double, double) { return 0.0; },
      [](double v, FakeStream&) { return std::optional<double>(v); }, s, coll);
  CHECK(ok);
  CHECK(coll == 0);
  CHECK(p.x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(p.t_elapsed == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("an expired flight collides first, then flies") {
  Particle p{2.0, 1.0, 0.0, 0.0, 0};
  // only the flight time draws from the stream: -10 log(exp(-1)) = 10
  FakeStream s({1.0 - std::exp(-1.0)});
  std::uint64_t coll = 0;
  const bool ok = detail::advance_particle(
      p, 1.0, 10.0, 0.0, PhaseDomain{10.0, 5.0}, 1.0, StepDirection::forward,
      [](double, double) { return 0.0; },
      [](double, FakeStream&) { return std::optional<double>(0.5); }, s, coll);
  CHECK(ok);
  CHECK(coll == 1);
  CHECK(p.v == 0.5);                               // replaced before the drift
  CHECK(p.x == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(p.flight_remaining == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("a removing collision ends the particle") {
  Particle p{2.0, 1.0, 0.0, 0.0, 0};
  FakeStream s({});
  std::uint64_t coll = 0;
  const bool ok = detail::advance_particle(
      p, 1.0, 1.0, 0.0, PhaseDomain{10.0, 5.0}, 1.0, StepDirection::forward,
      [](double, double) { return 0.0; },
      [](double, FakeStream&) { return std::optional<double>(); }, s, coll);
  CHECK_FALSE(ok);
  CHECK(coll == 1);
}

TEST_CASE("wall absorption ends the particle inside a macro-step") {
  Particle p{1.0, -3.0, 0.0, 1e9, 0};
  FakeStream s({0.9});  // 0.9 > alpha = 0.5: absorbed
  std::uint64_t coll = 0;
  const bool ok = detail::advance_particle(
      p, 1.0, 1.0, 0.0, PhaseDomain{10.0, 5.0}, 0.5, StepDirection::forward,
      [](double, double) { return 0.0; },
      [](double v, FakeStream&) { return std::optional<double>(v); }, s, coll);
  CHECK_FALSE(ok);
  CHECK(s.consumed() == 1);
}

}  // TEST_SUITE
