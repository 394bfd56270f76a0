// Command-line front end: solve the backward problem for a control field,
// simulate the physical ensemble under a stored control, and convert control
// files into plot- and report-friendly text.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "kinctrl/adjoint.hpp"
#include "kinctrl/config.hpp"
#include "kinctrl/control.hpp"
#include "kinctrl/forward.hpp"
#include "kinctrl/io.hpp"
#include "kinctrl/objective.hpp"
#include "kinctrl/sampling.hpp"

using namespace kinctrl;

namespace {

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(8u, hw == 0 ? 1u : hw));
}

// Options shared by the subcommands that run the solver or the simulator.
struct RunOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    seed_opt = cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--threads", threads, "worker threads")
        ->check(CLI::Range(1, 64));
  }

  SimConfig load() const {
    SimConfig cfg = parse_config_file(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    return cfg;
  }
};

int cmd_solve(const RunOptions& run, const std::string& out_path,
              const std::string& qtilde_path) {
  const SimConfig cfg = run.load();
  const AdjointRun sol = run_adjoint_oneshot(cfg, run.threads);
  write_control(out_path, sol.control);
  if (!qtilde_path.empty()) write_histograms(qtilde_path, sol.q_denoised);
  std::cout << "wrote " << out_path << ": " << sol.control.n_steps() + 1
            << " slices on " << cfg.n_x << "x" << cfg.n_v << "\n"
            << "particles: peak " << sol.peak_particles << ", injected "
            << sol.injected << ", cloned " << sol.cloned << ", absorbed "
            << sol.absorbed << ", removed " << sol.removed_velocity << "\n"
            << "collisions: " << sol.collisions << ", wall time "
            << sol.wall_seconds << " s\n";
  return 0;
}

int cmd_simulate(const RunOptions& run, const std::string& control_path,
                 const std::string& report_path, const std::string& hist_path) {
  const SimConfig cfg = run.load();
  ControlField u;
  if (!control_path.empty()) u = read_control(control_path);
  const ParticleEnsemble init = init_forward_ensemble(
      cfg.initial_density(), cfg.n_f, cfg.domain(), cfg.seed, run.threads);
  const ForwardRun fr = run_forward(cfg, u, init, run.threads);

  RunReport report;
  report.cost_j = cost_estimate(fr, u, cfg, run.threads);
  report.wall_seconds = fr.wall_seconds;
  report.initial_count = fr.initial_count;
  report.collisions = fr.collisions;
  report.counts = fr.counts;
  for (const auto& snap : fr.snapshots) {
    report.residuals.push_back(
        orbit_residual(snap, cfg.orbit(), cfg.n_t, cfg.horizon(), run.threads));
  }
  write_report(report_path, report);
  if (!hist_path.empty()) write_histograms(hist_path, fr.histograms);
  std::cout << "J = " << report.cost_j << ", survivors "
            << fr.counts.back() << " of " << fr.initial_count
            << ", terminal residual " << report.residuals.back() << "\n"
            << "wrote " << report_path << "\n";
  return 0;
}

int cmd_average(const std::string& in_path, const std::string& out_path) {
  const ControlField u = read_control(in_path);
  write_control(out_path, broadcast_time_average(u));
  std::cout << "wrote " << out_path << ": stationary law over "
            << u.n_steps() + 1 << " slices\n";
  return 0;
}

int cmd_plots(const std::string& in_path, const std::string& config_path,
              const std::string& out_dir) {
  const SimConfig cfg = parse_config_file(config_path);
  const ControlField u = read_control(in_path);
  const GridSpec grid = cfg.grid();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (int k = 0; k < static_cast<int>(u.steps.size()); ++k) {
    emit_quiver((fs::path(out_dir) / ("quiver_" + std::to_string(k) + ".tsv"))
                    .string(),
                u.steps[k], grid);
  }
  emit_quiver((fs::path(out_dir) / "quiver_ubar.tsv").string(), u.time_average,
              grid);
  std::cout << "wrote " << u.steps.size() << " + 1 quiver tables to "
            << out_dir << "\n";
  return 0;
}

int cmd_cost(const RunOptions& run, const std::string& control_path) {
  const SimConfig cfg = run.load();
  ControlField u;
  if (!control_path.empty()) u = read_control(control_path);
  const ParticleEnsemble init = init_forward_ensemble(
      cfg.initial_density(), cfg.n_f, cfg.domain(), cfg.seed, run.threads);
  const ForwardRun fr = run_forward(cfg, u, init, run.threads);
  std::cout << "J = " << cost_estimate(fr, u, cfg, run.threads) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"control synthesis for a collisional kinetic model"};
  app.require_subcommand(1);

  RunOptions solve_run;
  std::string solve_out, solve_qtilde;
  auto* solve = app.add_subcommand(
      "solve-adjoint", "solve backward once and store the control field");
  solve_run.attach(solve);
  solve->add_option("--out", solve_out, "control file to write")->required();
  solve->add_option("--dump-qtilde", solve_qtilde,
                    "also dump the smoothed per-step fields");

  RunOptions sim_run;
  std::string sim_control, sim_report, sim_hist;
  auto* sim = app.add_subcommand(
      "simulate", "run the physical ensemble under a stored control");
  sim_run.attach(sim);
  sim->add_option("--control", sim_control,
                  "control file; omit for the zero control")
      ->check(CLI::ExistingFile);
  sim->add_option("--report", sim_report, "report file to write")->required();
  sim->add_option("--hist", sim_hist, "also dump per-step histograms");

  std::string avg_in, avg_out;
  auto* avg = app.add_subcommand(
      "average-control", "replace every slice by the time-averaged law");
  avg->add_option("--in", avg_in, "control file to read")
      ->required()
      ->check(CLI::ExistingFile);
  avg->add_option("--out", avg_out, "control file to write")->required();

  std::string plot_in, plot_config, plot_dir;
  auto* plots = app.add_subcommand("emit-plots",
                                   "write quiver tables for every slice");
  plots->add_option("--in", plot_in, "control file to read")
      ->required()
      ->check(CLI::ExistingFile);
  plots->add_option("--config", plot_config, "configuration the grid is from")
      ->required()
      ->check(CLI::ExistingFile);
  plots->add_option("--out", plot_dir, "output directory")->required();

  RunOptions cost_run;
  std::string cost_control;
  auto* cost = app.add_subcommand("evaluate-cost",
                                  "estimate J for a stored or zero control");
  cost_run.attach(cost);
  cost->add_option("--control", cost_control,
                   "control file; omit for the zero control")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_run, solve_out, solve_qtilde);
    if (sim->parsed()) return cmd_simulate(sim_run, sim_control, sim_report,
                                           sim_hist);
    if (avg->parsed()) return cmd_average(avg_in, avg_out);
    if (plots->parsed()) return cmd_plots(plot_in, plot_config, plot_dir);
    if (cost->parsed()) return cmd_cost(cost_run, cost_control);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
