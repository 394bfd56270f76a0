#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kinctrl/domain.hpp"
#include "kinctrl/parallel.hpp"
#include "kinctrl/rng.hpp"

namespace kinctrl {

// Samplers are templated on the stream so tests can script the raw draws.

template <class Stream>
double sample_uniform(double a, double b, Stream& s) {
  if (!(a < b)) throw std::invalid_argument("sample_uniform needs a < b");
  return a + (b - a) * s.u01();  // in [a, b)
}

// Box-Muller, cosine branch; two raw draws per sample.
template <class Stream>
double sample_normal(double mean, double variance, Stream& s) {
  if (variance < 0.0) throw std::invalid_argument("negative variance");
  if (variance == 0.0) return mean;
  const double u1 = 1.0 - s.u01();  // (0, 1], keeps the log finite
  const double u2 = s.u01();
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + std::sqrt(variance) * z;
}

// Exponential free flight: dt = -tau log(r), r in (0, 1].
template <class Stream>
double free_flight_time(double tau, Stream& s) {
  if (!(tau > 0.0)) throw std::invalid_argument("free_flight_time needs tau > 0");
  return -tau * std::log(1.0 - s.u01());
}

enum class InitKind { uniform, gaussian };

// Initial density of the physical ensemble.  The Gaussian variant is
// diagonal-covariance and is resampled until the draw lands inside the
// phase-space window.
struct InitialDensity {
  InitKind kind = InitKind::uniform;
  double mean_x = 8.0;
  double mean_v = 3.5;
  double var_x = 0.15;
  double var_v = 0.15;
};

namespace detail {

// Standard normal conditioned on z >= a, exact for any a: plain rejection
// below the mode, exponential-proposal rejection in the tail.  Terminates
// with probability one regardless of how far out the tail sits.
template <class Stream>
double truncated_std_normal_above(double a, Stream& s) {
  if (a <= 0.0) {
    for (;;) {
      const double z = sample_normal(0.0, 1.0, s);
      if (z >= a) return z;
    }
  }
  const double lam = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a - std::log(1.0 - s.u01()) / lam;
    const double d = x - lam;
    if (s.u01() <= std::exp(-0.5 * d * d)) return x;
  }
}

template <class Stream>
Particle windowed_gaussian_draw(double mx, double mv, double vx, double vv,
                                const PhaseDomain& dom, Stream& s) {
  for (int attempt = 0; attempt < (1 << 20); ++attempt) {
    Particle p;
    p.x = sample_normal(mx, vx, s);
    p.v = sample_normal(mv, vv, s);
    if (p.x >= 0.0 && p.x <= dom.p_max && p.v >= -dom.v_max && p.v <= dom.v_max) {
      return p;
    }
  }
  throw std::runtime_error("gaussian draw never landed inside the window");
}

}  // namespace detail

inline ParticleEnsemble init_forward_ensemble(const InitialDensity& density,
                                              std::size_t n,
                                              const PhaseDomain& dom,
                                              std::uint64_t seed,
                                              unsigned threads = 1) {
  if (n == 0) throw std::invalid_argument("empty initial ensemble");
  ParticleEnsemble ens;
  ens.kind = EnsembleKind::forward;
  ens.particles.resize(n);
  ens.next_id = n;
  for_each_block(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      RngStream s(seed, StreamPurpose::init_forward, p, 0);
      Particle q;
      if (density.kind == InitKind::uniform) {
        q.x = sample_uniform(0.0, dom.p_max, s);
        q.v = sample_uniform(-dom.v_max, dom.v_max, s);
      } else {
        q = detail::windowed_gaussian_draw(density.mean_x, density.mean_v,
                                           density.var_x, density.var_v, dom, s);
      }
      q.id = p;
      ens.particles[p] = q;
    }
  });
  return ens;
}

// Terminal ensemble of the backward solve: a windowed Gaussian cloud around
// the terminal objective's center.
inline ParticleEnsemble init_adjoint_ensemble(double mean_x, double mean_v,
                                              double var_x, double var_v,
                                              std::size_t n,
                                              const PhaseDomain& dom,
                                              std::uint64_t seed,
                                              unsigned threads = 1) {
  if (n == 0) throw std::invalid_argument("empty terminal ensemble");
  ParticleEnsemble ens;
  ens.kind = EnsembleKind::adjoint;
  ens.particles.resize(n);
  ens.next_id = n;
  for_each_block(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      RngStream s(seed, StreamPurpose::init_adjoint, p, 0);
      Particle q = detail::windowed_gaussian_draw(mean_x, mean_v, var_x, var_v,
                                                  dom, s);
      q.id = p;
      ens.particles[p] = q;
    }
  });
  return ens;
}

}  // namespace kinctrl
