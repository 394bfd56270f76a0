#include "kinctrl/denoise.hpp"

#include <stdexcept>
#include <vector>

#include "kinctrl/parallel.hpp"

namespace kinctrl {

GridField denoise_field(const GridField& q, double c_s, double dv,
                        unsigned threads) {
  if (c_s < 0.0) throw std::invalid_argument("c_s must be non-negative");
  if (!(dv > 0.0)) throw std::invalid_argument("dv must be positive");
  if (q.nx < 1 || q.nv < 2) throw std::invalid_argument("field too small");
  GridField out = q;
  if (c_s == 0.0) return out;

  const int n = q.nv;
  const double a = c_s / (dv * dv);
  // Tridiagonal rows: diag 1 + 2a interior, 1 + a at the two ends, off -a.
  // The Thomas factorization is the same for every row, so do it once.
  std::vector<double> cp(n);  // scaled upper diagonal
  {
    double diag0 = 1.0 + a;
    cp[0] = -a / diag0;
    for (int j = 1; j < n - 1; ++j) {
      cp[j] = -a / (1.0 + 2.0 * a + a * cp[j - 1]);
    }
  }

  for_each_block(static_cast<std::size_t>(q.nx), threads,
                 [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<double> d(n);
    for (std::size_t i = lo; i < hi; ++i) {
      const double* src = &q.values[i * n];
      d[0] = src[0] / (1.0 + a);
      for (int j = 1; j < n; ++j) {
        const double diag = (j == n - 1) ? 1.0 + a : 1.0 + 2.0 * a;
        d[j] = (src[j] + a * d[j - 1]) / (diag + a * cp[j - 1]);
      }
      double* dst = &out.values[i * n];
      dst[n - 1] = d[n - 1];
      for (int j = n - 2; j >= 0; --j) {
        dst[j] = d[j] - cp[j] * dst[j + 1];
      }
    }
  });
  return out;
}

}  // namespace kinctrl
