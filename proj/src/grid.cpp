#include "swflow/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swflow {

TorusGrid make_grid(int n, std::vector<int> sizes, std::vector<double> lengths) {
  if (n < 1 || n > 6) throw std::invalid_argument("make_grid: dimension must be in [1, 6]");
  if (static_cast<int>(sizes.size()) != n)
    throw std::invalid_argument("make_grid: sizes must have one entry per axis");
  if (lengths.empty()) lengths.assign(n, kTwoPi);
  if (static_cast<int>(lengths.size()) != n)
    throw std::invalid_argument("make_grid: lengths must have one entry per axis");
  for (int a = 0; a < n; ++a) {
    if (sizes[a] < 4 || sizes[a] % 2 != 0)
      throw std::invalid_argument("make_grid: size along axis " + std::to_string(a) +
                                  " must be even and >= 4");
    if (!(lengths[a] > 0.0))
      throw std::invalid_argument("make_grid: length along axis " + std::to_string(a) +
                                  " must be positive");
  }
  TorusGrid g;
  g.n = n;
  g.sizes = std::move(sizes);
  g.lengths = std::move(lengths);
  return g;
}

double torus_distance(const TorusGrid& grid, const std::vector<double>& x,
                      const std::vector<double>& y) {
  double d2 = 0.0;
  for (int a = 0; a < grid.n; ++a) {
    double L = grid.lengths[a];
    double d = std::fabs(std::fmod(x[a] - y[a], L));
    if (d > 0.5 * L) d = L - d;
    d2 += d * d;
  }
  return std::sqrt(d2);
}

}  // namespace swflow
