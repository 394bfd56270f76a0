#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "kinctrl/sampling.hpp"

namespace kinctrl {

// Keilson-Storer relaxation kernel.  gamma controls velocity memory, tau is
// the mean time between collisions (rate 1/tau), beta sets the thermal width.
struct KSParams {
  double gamma = 0.9999;
  double tau = 0.0025;
  double beta = 0.0;

  double rate() const { return 1.0 / tau; }
  // collision time of the backward evolution
  double tau_adjoint() const { return gamma * tau; }

  static KSParams make(double gamma, double tau) {
    return make(gamma, tau, 1.0 / (2.0 * (1.0 - gamma * gamma)));
  }
  static KSParams make(double gamma, double tau, double beta) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
      throw std::invalid_argument("ks gamma must lie in (0, 1)");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("ks tau must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("ks beta must be positive");
    return KSParams{gamma, tau, beta};
  }
};

// A(v, w): rate density of scattering v -> w, a Gaussian centered at gamma*v
// with variance 1/(2 beta), scaled by the collision rate.
inline double ks_kernel(double v, double w, const KSParams& k) {
  const double d = w - k.gamma * v;
  return k.rate() * std::sqrt(k.beta / std::numbers::pi) *
         std::exp(-k.beta * d * d);
}

// A*(v, w): the kernel of the backward evolution.  Written via the Gaussian
// centered at v/gamma so tests can confirm gamma * A*(w, v) == A(v, w).
inline double ks_adjoint_kernel(double v, double w, const KSParams& k) {
  const double g2 = k.gamma * k.gamma;
  const double d = w - v / k.gamma;
  return k.rate() / k.gamma * std::sqrt(k.beta / std::numbers::pi) *
         std::exp(-k.beta * g2 * d * d);
}

// Net gain rate of the backward collision operator applied to a constant.
inline double c_star_0(const KSParams& k) {
  return k.rate() * (1.0 - k.gamma) / k.gamma;
}

// Post-collision velocity ~ N(gamma v, 1/(2 beta)); out-of-window draws are
// rejected and redrawn with the same pre-collision velocity.  A particle can
// drift several deviations past the window during a long free flight, where
// rejection would effectively never terminate, so after a burst of failures
// the conditional tail is drawn directly.  Both stages sample the same
// window-conditioned Gaussian.
template <class Stream>
double forward_postcollision(double v, const KSParams& k, double v_max,
                             Stream& s) {
  const double mean = k.gamma * v;
  const double var = 1.0 / (2.0 * k.beta);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double w = sample_normal(mean, var, s);
    if (std::abs(w) <= v_max) return w;
  }
  const double sd = std::sqrt(var);
  for (;;) {
    // fold onto the near edge; mass beyond the far edge is negligible there
    const double a = (std::abs(mean) - v_max) / sd;
    const double y = detail::truncated_std_normal_above(a, s);
    const double w = mean > 0.0 ? mean - sd * y : mean + sd * y;
    if (std::abs(w) <= v_max) return w;
  }
}

// Backward-evolution collision: velocity ~ N(v/gamma, 1/(2 beta gamma^2)).
// An out-of-window draw removes the particle instead of being redrawn.
template <class Stream>
std::optional<double> adjoint_postcollision(double v, const KSParams& k,
                                            double v_max, Stream& s) {
  const double g2 = k.gamma * k.gamma;
  const double w = sample_normal(v / k.gamma, 1.0 / (2.0 * k.beta * g2), s);
  if (std::abs(w) > v_max) return std::nullopt;
  return w;
}

}  // namespace kinctrl
