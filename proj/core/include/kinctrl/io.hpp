#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kinctrl/control.hpp"
#include "kinctrl/domain.hpp"

namespace kinctrl {

// Binary control container, format "KCF1":
//   bytes 0..3   magic "KCF1"
//   3 x u32 LE   n_t, n_x, n_v
//   (n_t+1) * n_x * n_v f64 LE   per-step slices, slowest index k, then i, j
//   n_x * n_v f64 LE             the time-averaged field
void write_control(const std::string& path, const ControlField& u);
ControlField read_control(const std::string& path);

// Tab-separated arrow field for plotting: one row per cell with the cell
// center and the phase-space flow (v, u) there.
void emit_quiver(const std::string& path, const GridField& u,
                 const GridSpec& grid);

// Tab-separated per-step occupation counts, one row per (step, cell).
void write_histograms(const std::string& path,
                      const std::vector<GridField>& hists);

// Headline numbers of a forward run plus its per-step table.
struct RunReport {
  double cost_j = 0.0;
  double wall_seconds = 0.0;
  std::size_t initial_count = 0;
  std::uint64_t collisions = 0;
  std::vector<std::size_t> counts;
  std::vector<double> residuals;
};

void write_report(const std::string& path, const RunReport& r);

}  // namespace kinctrl
