#include "swflow/random_fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "swflow/transforms.hpp"

namespace swflow {

namespace {

// Uniform in [-1, 1) from the raw engine stream; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_draw(std::mt19937_64& eng) {
  return 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

Field random_band_limited(const TorusGrid& grid, int rank, int spinor_rank, int kmax,
                          std::uint64_t seed, double amplitude, bool purely_imaginary) {
  for (int a = 0; a < grid.n; ++a) {
    if (3 * kmax >= grid.sizes[a])
      throw std::invalid_argument("random_band_limited: kmax must satisfy kmax < N/3");
  }
  if (kmax < 0) throw std::invalid_argument("random_band_limited: kmax must be >= 0");

  Field f = make_field(grid, rank, spinor_rank,
                       purely_imaginary && rank == 1 && spinor_rank == 1 ? 1 : 0);
  if (amplitude == 0.0) {
    f.purely_imaginary = purely_imaginary;
    return f;
  }

  // Count in-band modes for the amplitude normalization.
  std::int64_t band = 1;
  for (int a = 0; a < grid.n; ++a) band *= std::min(2 * kmax + 1, grid.sizes[a]);
  const double scale = amplitude / std::sqrt(static_cast<double>(band));

  std::mt19937_64 eng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  const std::int64_t sites = grid.site_count();
  std::vector<int> idx(grid.n, 0);
  for (Eigen::Index lane = 0; lane < f.data.cols(); ++lane) {
    std::fill(idx.begin(), idx.end(), 0);
    for (std::int64_t row = 0; row < sites; ++row) {
      bool in_band = true;
      for (int a = 0; a < grid.n; ++a) {
        int s = idx[a] <= grid.sizes[a] / 2 ? idx[a] : idx[a] - grid.sizes[a];
        if (s > kmax || -s > kmax) {
          in_band = false;
          break;
        }
      }
      if (in_band) {
        double re = unit_draw(eng);
        double im = unit_draw(eng);
        f.data(row, lane) = Complex(re, im) * scale;
      }
      for (int a = grid.n - 1; a >= 0; --a) {
        if (++idx[a] < grid.sizes[a]) break;
        idx[a] = 0;
      }
    }
  }
  to_physical_inplace(f);
  if (purely_imaginary) project_imaginary_inplace(f);
  return f;
}

}  // namespace swflow
