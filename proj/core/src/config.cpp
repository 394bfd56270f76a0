#include "kinctrl/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kinctrl {

TargetOrbit SimConfig::orbit() const {
  return TargetOrbit{2.0 * std::numbers::pi / horizon(), p_max / 2.0, 0.0,
                     orbit_radius};
}

ForceSpec SimConfig::force() const {
  return ForceSpec{2.0 * std::numbers::pi / horizon(), p_max / 2.0};
}

Point2 SimConfig::z_terminal() const {
  if (z_t_set) return Point2{z_t_x, z_t_v};
  return z_desired(horizon(), orbit());
}

ObjectiveParams SimConfig::objective() const {
  ObjectiveParams obj;
  obj.theta_well = GaussianWell{c_theta, sigma_theta_x, sigma_theta_v};
  obj.phi_well = GaussianWell{c_phi, sigma_phi_x, sigma_phi_v};
  obj.z_terminal = z_terminal();
  obj.nu = nu;
  obj.horizon = horizon();
  obj.n_t = n_t;
  obj.use_time_averaged_theta = use_time_averaged_theta;
  return obj;
}

InitialDensity SimConfig::initial_density() const {
  return InitialDensity{init_kind, init_mean_x, init_mean_v, init_var_x,
                        init_var_v};
}

void validate(const SimConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("config: " + what);
  };
  if (cfg.n_t < 1) fail("n_t must be >= 1");
  if (!(cfg.dt > 0.0)) fail("dt must be positive");
  if (cfg.n_x < 2 || cfg.n_v < 2) fail("n_x and n_v must be >= 2");
  if (!(cfg.v_max > 0.0)) fail("v_max must be positive");
  if (!(cfg.p_max > 0.0)) fail("p_max must be positive");
  if (cfg.n_f < 1) fail("n_f must be >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) fail("gamma must lie in (0, 1)");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) fail("alpha must lie in [0, 1]");
  if (!(cfg.nu > 0.0)) fail("nu must be positive");
  if (cfg.c_s < 0.0) fail("c_s must be non-negative");
  if (cfg.n_q_terminal < 1) fail("n_q_terminal must be >= 1");
  if (!(cfg.tau_eff() > 0.0)) fail("tau must be positive");
  if (!(cfg.beta_eff() > 0.0)) fail("beta must be positive");
  if (!(cfg.sigma_theta_x > 0.0) || !(cfg.sigma_theta_v > 0.0)) {
    fail("sigma_theta entries must be positive");
  }
  if (!(cfg.sigma_phi_x > 0.0) || !(cfg.sigma_phi_v > 0.0)) {
    fail("sigma_phi entries must be positive");
  }
  if (!(cfg.orbit_radius > 0.0)) fail("orbit_radius must be positive");
  if (cfg.max_substep < 0.0) fail("max_substep must be non-negative");
  if (!(cfg.init_var_x > 0.0) || !(cfg.init_var_v > 0.0)) {
    fail("init variances must be positive");
  }
}

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const std::string& origin, int line,
                          const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw std::invalid_argument(os.str());
}

double parse_double(const Line& ln, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(ln.value, &pos);
    if (pos != ln.value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    fail_at(origin, ln.number, "bad numeric value for '" + ln.key + "'");
  }
}

long long parse_int(const Line& ln, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(ln.value, &pos);
    if (pos != ln.value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    fail_at(origin, ln.number, "bad integer value for '" + ln.key + "'");
  }
}

bool parse_bool(const Line& ln, const std::string& origin) {
  if (ln.value == "true" || ln.value == "1") return true;
  if (ln.value == "false" || ln.value == "0") return false;
  fail_at(origin, ln.number, "bad boolean value for '" + ln.key + "'");
}

}  // namespace

SimConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  SimConfig cfg;
  std::set<std::string> seen;
  bool have_dx = false, have_dv = false;
  double want_dx = 0.0, want_dv = 0.0;
  int want_dx_line = 0, want_dv_line = 0;

  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail_at(origin, number, "expected 'key = value'");
    }
    Line ln{number, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1))};
    if (ln.key.empty()) fail_at(origin, number, "empty key");
    if (ln.value.empty()) fail_at(origin, number, "empty value for '" + ln.key + "'");
    if (!seen.insert(ln.key).second) {
      fail_at(origin, number, "duplicate key '" + ln.key + "'");
    }

    if (ln.key == "n_t") cfg.n_t = static_cast<int>(parse_int(ln, origin));
    else if (ln.key == "dt") cfg.dt = parse_double(ln, origin);
    else if (ln.key == "n_x") cfg.n_x = static_cast<int>(parse_int(ln, origin));
    else if (ln.key == "n_v") cfg.n_v = static_cast<int>(parse_int(ln, origin));
    else if (ln.key == "v_max") cfg.v_max = parse_double(ln, origin);
    else if (ln.key == "p_max") cfg.p_max = parse_double(ln, origin);
    else if (ln.key == "dx") { have_dx = true; want_dx = parse_double(ln, origin); want_dx_line = number; }
    else if (ln.key == "dv") { have_dv = true; want_dv = parse_double(ln, origin); want_dv_line = number; }
    else if (ln.key == "n_f") cfg.n_f = static_cast<std::size_t>(parse_int(ln, origin));
    else if (ln.key == "gamma") cfg.gamma = parse_double(ln, origin);
    else if (ln.key == "alpha") cfg.alpha = parse_double(ln, origin);
    else if (ln.key == "nu") cfg.nu = parse_double(ln, origin);
    else if (ln.key == "c_theta") cfg.c_theta = parse_double(ln, origin);
    else if (ln.key == "c_phi") cfg.c_phi = parse_double(ln, origin);
    else if (ln.key == "c_s") cfg.c_s = parse_double(ln, origin);
    else if (ln.key == "n_q_terminal") cfg.n_q_terminal = static_cast<std::size_t>(parse_int(ln, origin));
    else if (ln.key == "tau") cfg.tau = parse_double(ln, origin);
    else if (ln.key == "beta") cfg.beta = parse_double(ln, origin);
    else if (ln.key == "sigma_theta_x") cfg.sigma_theta_x = parse_double(ln, origin);
    else if (ln.key == "sigma_theta_v") cfg.sigma_theta_v = parse_double(ln, origin);
    else if (ln.key == "sigma_phi_x") cfg.sigma_phi_x = parse_double(ln, origin);
    else if (ln.key == "sigma_phi_v") cfg.sigma_phi_v = parse_double(ln, origin);
    else if (ln.key == "z_t_x") { cfg.z_t_set = true; cfg.z_t_x = parse_double(ln, origin); }
    else if (ln.key == "z_t_v") { cfg.z_t_set = true; cfg.z_t_v = parse_double(ln, origin); }
    else if (ln.key == "orbit_radius") cfg.orbit_radius = parse_double(ln, origin);
    else if (ln.key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(ln, origin));
    else if (ln.key == "use_time_averaged_theta") cfg.use_time_averaged_theta = parse_bool(ln, origin);
    else if (ln.key == "adjoint_characteristics") {
      if (ln.value == "force_negated") cfg.adjoint_characteristics = AdjointCharacteristics::force_negated;
      else if (ln.value == "reversed") cfg.adjoint_characteristics = AdjointCharacteristics::reversed;
      else fail_at(origin, number, "adjoint_characteristics must be 'force_negated' or 'reversed'");
    }
    else if (ln.key == "max_adjoint_particles") cfg.max_adjoint_particles = static_cast<std::size_t>(parse_int(ln, origin));
    else if (ln.key == "max_substep") cfg.max_substep = parse_double(ln, origin);
    else if (ln.key == "init_kind") {
      if (ln.value == "uniform") cfg.init_kind = InitKind::uniform;
      else if (ln.value == "gaussian") cfg.init_kind = InitKind::gaussian;
      else fail_at(origin, number, "init_kind must be 'uniform' or 'gaussian'");
    }
    else if (ln.key == "init_mean_x") cfg.init_mean_x = parse_double(ln, origin);
    else if (ln.key == "init_mean_v") cfg.init_mean_v = parse_double(ln, origin);
    else if (ln.key == "init_var_x") cfg.init_var_x = parse_double(ln, origin);
    else if (ln.key == "init_var_v") cfg.init_var_v = parse_double(ln, origin);
    else fail_at(origin, number, "unknown key '" + ln.key + "'");
  }

  validate(cfg);
  // dx/dv may be given for documentation but must agree with the grid
  if (have_dx) {
    const double dx = cfg.p_max / cfg.n_x;
    if (std::abs(want_dx - dx) > 1e-9 * dx) {
      fail_at(origin, want_dx_line, "dx disagrees with p_max / n_x");
    }
  }
  if (have_dv) {
    const double dv = 2.0 * cfg.v_max / cfg.n_v;
    if (std::abs(want_dv - dv) > 1e-9 * dv) {
      fail_at(origin, want_dv_line, "dv disagrees with 2 v_max / n_v");
    }
  }
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n_t = " << cfg.n_t << "\n";
  os << "dt = " << cfg.dt << "\n";
  os << "n_x = " << cfg.n_x << "\n";
  os << "n_v = " << cfg.n_v << "\n";
  os << "v_max = " << cfg.v_max << "\n";
  os << "p_max = " << cfg.p_max << "\n";
  os << "n_f = " << cfg.n_f << "\n";
  os << "gamma = " << cfg.gamma << "\n";
  os << "alpha = " << cfg.alpha << "\n";
  os << "nu = " << cfg.nu << "\n";
  os << "c_theta = " << cfg.c_theta << "\n";
  os << "c_phi = " << cfg.c_phi << "\n";
  os << "c_s = " << cfg.c_s << "\n";
  os << "n_q_terminal = " << cfg.n_q_terminal << "\n";
  os << "tau = " << cfg.tau_eff() << "\n";
  os << "beta = " << cfg.beta_eff() << "\n";
  os << "sigma_theta_x = " << cfg.sigma_theta_x << "\n";
  os << "sigma_theta_v = " << cfg.sigma_theta_v << "\n";
  os << "sigma_phi_x = " << cfg.sigma_phi_x << "\n";
  os << "sigma_phi_v = " << cfg.sigma_phi_v << "\n";
  const Point2 zt = cfg.z_terminal();
  os << "z_t_x = " << zt.x << "\n";
  os << "z_t_v = " << zt.v << "\n";
  os << "orbit_radius = " << cfg.orbit_radius << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "use_time_averaged_theta = "
     << (cfg.use_time_averaged_theta ? "true" : "false") << "\n";
  os << "adjoint_characteristics = "
     << (cfg.adjoint_characteristics == AdjointCharacteristics::force_negated
             ? "force_negated"
             : "reversed")
     << "\n";
  os << "max_adjoint_particles = " << cfg.max_adjoint_particles << "\n";
  os << "max_substep = " << cfg.max_substep << "\n";
  os << "init_kind = "
     << (cfg.init_kind == InitKind::uniform ? "uniform" : "gaussian") << "\n";
  os << "init_mean_x = " << cfg.init_mean_x << "\n";
  os << "init_mean_v = " << cfg.init_mean_v << "\n";
  os << "init_var_x = " << cfg.init_var_x << "\n";
  os << "init_var_v = " << cfg.init_var_v << "\n";
  return os.str();
}

}  // namespace kinctrl
