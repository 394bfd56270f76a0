#pragma once

#include <cstdint>
#include <string>

#include "kinctrl/collisions.hpp"
#include "kinctrl/domain.hpp"
#include "kinctrl/dynamics.hpp"
#include "kinctrl/objective.hpp"
#include "kinctrl/sampling.hpp"

namespace kinctrl {

enum class AdjointCharacteristics { force_negated, reversed };

// Every knob of a run.  Fields left at their sentinel (tau, beta <= 0 or
// z_t unset) are derived from the rest: tau = dt/10, beta = 1/(2(1-gamma^2)),
// z_t = the orbit point at t = T.  Accessors below always return effective
// values.
struct SimConfig {
  int n_t = 100;
  double dt = 0.025;
  int n_x = 50;
  int n_v = 50;
  double v_max = 5.0;
  double p_max = 10.0;
  std::size_t n_f = 10000;
  double gamma = 0.9999;
  double alpha = 0.5;
  double nu = 1.0;
  double c_theta = 1000.0;
  double c_phi = 1000.0;
  double c_s = 0.5;
  std::size_t n_q_terminal = 600;

  double tau = 0.0;   // <= 0: use dt / 10
  double beta = 0.0;  // <= 0: use 1 / (2 (1 - gamma^2))

  double sigma_theta_x = 1.0;
  double sigma_theta_v = 1.0;
  double sigma_phi_x = 1.0;
  double sigma_phi_v = 1.0;

  bool z_t_set = false;
  double z_t_x = 0.0;
  double z_t_v = 0.0;

  double orbit_radius = 2.5;

  std::uint64_t seed = 0;
  bool use_time_averaged_theta = true;
  AdjointCharacteristics adjoint_characteristics = AdjointCharacteristics::force_negated;
  std::size_t max_adjoint_particles = 0;  // 0: unlimited
  double max_substep = 0.0;               // <= 0: sub-steps are whole flights

  InitKind init_kind = InitKind::uniform;
  double init_mean_x = 8.0;
  double init_mean_v = 3.5;
  double init_var_x = 0.15;
  double init_var_v = 0.15;

  double horizon() const { return n_t * dt; }
  double tau_eff() const { return tau > 0.0 ? tau : dt / 10.0; }
  double beta_eff() const {
    return beta > 0.0 ? beta : 1.0 / (2.0 * (1.0 - gamma * gamma));
  }
  Point2 z_terminal() const;

  PhaseDomain domain() const { return PhaseDomain{p_max, v_max}; }
  GridSpec grid() const { return GridSpec::make(n_x, n_v, domain()); }
  KSParams ks() const { return KSParams::make(gamma, tau_eff(), beta_eff()); }
  TargetOrbit orbit() const;
  ForceSpec force() const;
  ObjectiveParams objective() const;
  InitialDensity initial_density() const;
};

// Throws std::invalid_argument describing the first violated constraint.
void validate(const SimConfig& cfg);

// Flat "key = value" text; '#' starts a comment.  Unknown and duplicate keys
// are errors carrying the offending line number.
SimConfig parse_config_text(const std::string& text, const std::string& origin);
SimConfig parse_config_file(const std::string& path);

// All effective values, parseable by parse_config_text.
std::string serialize_config(const SimConfig& cfg);

}  // namespace kinctrl
