#pragma once

#include <cstdint>
#include <vector>

namespace swflow {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform periodic lattice on the flat torus T^n = R^n / (L_1 Z x ... x L_n Z).
///
/// Sites are indexed row-major over the axes in declared order (axis 0 slowest,
/// axis n-1 fastest), site coordinates are x_j = m_j * L_j / N_j.
struct TorusGrid {
  int n = 0;
  std::vector<int> sizes;       // points per axis, each even and >= 4
  std::vector<double> lengths;  // periods L_j > 0

  std::int64_t site_count() const {
    std::int64_t s = 1;
    for (int nj : sizes) s *= nj;
    return s;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < n; ++a) v *= lengths[a] / sizes[a];
    return v;
  }
  double volume() const {
    double v = 1.0;
    for (double l : lengths) v *= l;
    return v;
  }
  double spacing(int axis) const { return lengths[axis] / sizes[axis]; }

  /// Flattening stride of an axis (row-major, axis 0 slowest).
  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int a = axis + 1; a < n; ++a) s *= sizes[a];
    return s;
  }

  /// Coordinate of lattice index m along an axis.
  double coord(int axis, int index) const { return index * spacing(axis); }

  bool same_layout(const TorusGrid& o) const {
    return n == o.n && sizes == o.sizes && lengths == o.lengths;
  }
};

/// Builds a validated grid. Periods default to 2*pi on every axis when
/// `lengths` is empty. Rejects odd or undersized N_j and nonpositive periods.
TorusGrid make_grid(int n, std::vector<int> sizes, std::vector<double> lengths = {});

/// Distance on the torus between two points given by coordinates.
double torus_distance(const TorusGrid& grid, const std::vector<double>& x,
                      const std::vector<double>& y);

}  // namespace swflow
