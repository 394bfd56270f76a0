#include "kinctrl/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace kinctrl {

namespace {

constexpr char kMagic[4] = {'K', 'C', 'F', '1'};

template <class T>
void put(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw std::runtime_error("control file ends prematurely");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}

}  // namespace

void write_control(const std::string& path, const ControlField& u) {
  if (u.empty()) throw std::invalid_argument("cannot write an empty control");
  const std::size_t cells = static_cast<std::size_t>(u.nx) * u.nv;
  if (u.time_average.values.size() != cells) {
    throw std::invalid_argument("control has no time average");
  }
  for (const GridField& s : u.steps) {
    if (s.values.size() != cells) {
      throw std::invalid_argument("control slice has the wrong shape");
    }
  }
  auto os = open_out(path, std::ios::binary);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.n_steps()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.nx));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.nv));
  for (const GridField& s : u.steps) {
    for (double v : s.values) put(os, v);
  }
  for (double v : u.time_average.values) put(os, v);
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

ControlField read_control(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error(path + " is not a KCF1 control file");
  }
  const auto nt = get<std::uint32_t>(is);
  const auto nx = get<std::uint32_t>(is);
  const auto nv = get<std::uint32_t>(is);
  if (nt < 1 || nx < 2 || nv < 2) {
    throw std::runtime_error(path + " has degenerate dimensions");
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(nx) * nv;
  const std::uint64_t total = (static_cast<std::uint64_t>(nt) + 2) * cells;
  if (total > (1ull << 30)) {
    throw std::runtime_error(path + " declares unreasonable dimensions");
  }
  ControlField u;
  u.nx = static_cast<int>(nx);
  u.nv = static_cast<int>(nv);
  u.steps.assign(nt + 1, GridField(u.nx, u.nv));
  for (std::uint32_t k = 0; k <= nt; ++k) {
    u.steps[k].step = static_cast<int>(k);
    for (double& v : u.steps[k].values) v = get<double>(is);
  }
  u.time_average = GridField(u.nx, u.nv);
  for (double& v : u.time_average.values) v = get<double>(is);
  if (is.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(path + " has trailing bytes");
  }
  return u;
}

void emit_quiver(const std::string& path, const GridField& u,
                 const GridSpec& grid) {
  if (u.nx != grid.nx || u.nv != grid.nv) {
    throw std::invalid_argument("field does not match the grid");
  }
  auto os = open_out(path, std::ios::out);
  os << "x\tv\tdx\tdv\n" << std::setprecision(17);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const double v = grid.v_center(j);
      os << grid.x_center(i) << '\t' << v << '\t' << v << '\t' << u.at(i, j)
         << '\n';
    }
  }
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

void write_histograms(const std::string& path,
                      const std::vector<GridField>& hists) {
  auto os = open_out(path, std::ios::out);
  os << "step\ti\tj\tcount\n" << std::setprecision(17);
  for (const GridField& h : hists) {
    for (int i = 0; i < h.nx; ++i) {
      for (int j = 0; j < h.nv; ++j) {
        os << h.step << '\t' << i << '\t' << j << '\t' << h.at(i, j) << '\n';
      }
    }
  }
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

void write_report(const std::string& path, const RunReport& r) {
  if (r.counts.size() != r.residuals.size()) {
    throw std::invalid_argument("report table columns disagree in length");
  }
  auto os = open_out(path, std::ios::out);
  os << std::setprecision(17);
  os << "cost_j = " << r.cost_j << '\n';
  os << "wall_seconds = " << r.wall_seconds << '\n';
  os << "initial_count = " << r.initial_count << '\n';
  os << "collisions = " << r.collisions << '\n';
  os << "step\tcount\tresidual\n";
  for (std::size_t k = 0; k < r.counts.size(); ++k) {
    os << k << '\t' << r.counts[k] << '\t' << r.residuals[k] << '\n';
  }
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace kinctrl
