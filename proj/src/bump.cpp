#include "swflow/bump.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swflow/transforms.hpp"

namespace swflow {

ScalarField bump_function(const TorusGrid& grid, const std::vector<double>& center,
                          double r_plateau, double r_support) {
  if (static_cast<int>(center.size()) != grid.n)
    throw std::invalid_argument("bump_function: center must have one entry per axis");
  double min_half_period = grid.lengths[0] / 2;
  for (double l : grid.lengths) min_half_period = std::min(min_half_period, l / 2);
  if (!(0.0 < r_plateau && r_plateau < r_support && r_support < min_half_period))
    throw std::invalid_argument(
        "bump_function: need 0 < r_plateau < r_support < min period / 2");

  ScalarField f = make_scalar(grid);
  std::vector<double> x(grid.n);
  std::vector<int> idx(grid.n, 0);
  const std::int64_t sites = grid.site_count();
  std::vector<std::int64_t> plateau_sites;
  for (std::int64_t row = 0; row < sites; ++row) {
    for (int a = 0; a < grid.n; ++a) x[a] = grid.coord(a, idx[a]);
    double d = torus_distance(grid, x, center);
    double v = 0.0;
    if (d <= r_plateau) {
      v = 1.0;
      plateau_sites.push_back(row);
    } else if (d < r_support) {
      v = 0.5 * (1.0 + std::cos(kTwoPi / 2 * (d - r_plateau) / (r_support - r_plateau)));
    }
    f.data(row, 0) = v;
    for (int a = grid.n - 1; a >= 0; --a) {
      if (++idx[a] < grid.sizes[a]) break;
      idx[a] = 0;
    }
  }
  dealias_inplace(f);
  // The projection ripples the plateau slightly below 1; rescale by the
  // measured deficit so clamping lands the plateau back at exactly 1.
  double plateau_min = 1.0;
  for (std::int64_t row : plateau_sites)
    plateau_min = std::min(plateau_min, f.data(row, 0).real());
  if (plateau_min > 0.5 && plateau_min < 1.0) f.data *= 3.0 - 2.0 * plateau_min;
  for (std::int64_t row = 0; row < sites; ++row) {
    double v = f.data(row, 0).real();
    f.data(row, 0) = Complex(std::min(1.0, std::max(0.0, v)), 0.0);
  }
  return f;
}

}  // namespace swflow
