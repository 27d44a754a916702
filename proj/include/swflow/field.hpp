#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <string>

#include "swflow/grid.hpp"

namespace swflow {

using Complex = std::complex<double>;

/// Rank-j covariant tensor field with complex spinor values on a TorusGrid.
///
/// Storage is (sites x lanes) with lane = tensor_flat * spinor_rank + s, the
/// tensor multi-index flattened row-major with the first index slowest. The
/// leading `rank - form_degree` indices are plain covariant slots (e.g. from
/// repeated covariant differentiation); the trailing `form_degree` indices
/// form an antisymmetric block. Inner products weight the antisymmetric block
/// by 1/form_degree! so that differential-form norms come out in the usual
/// sum-over-increasing-indices convention.
struct Field {
  TorusGrid grid;
  int rank = 0;
  int spinor_rank = 1;
  int form_degree = 0;
  bool purely_imaginary = false;
  Eigen::ArrayXXcd data;  // (sites, lanes), column-major: one lane contiguous

  int tensor_count() const {
    int t = 1;
    for (int j = 0; j < rank; ++j) t *= grid.n;
    return t;
  }
  int lanes() const { return tensor_count() * spinor_rank; }
  int lane(int tensor_flat, int s) const { return tensor_flat * spinor_rank + s; }

  bool compatible(const Field& o) const {
    return grid.same_layout(o.grid) && rank == o.rank && spinor_rank == o.spinor_rank &&
           form_degree == o.form_degree;
  }
};

/// Convenience aliases; the distinctions live in (rank, spinor_rank,
/// form_degree) and the purely_imaginary flag.
using ScalarField = Field;      // rank 0, spinor_rank 1
using SpinorField = Field;      // rank 0, spinor_rank r
using ConnectionForm = Field;   // rank 1, spinor_rank 1, purely imaginary
using TwoForm = Field;          // rank 2 antisymmetric, spinor_rank 1
using TensorSpinor = Field;     // rank j, spinor_rank r

Field make_field(const TorusGrid& grid, int rank, int spinor_rank = 1, int form_degree = 0);
ScalarField make_scalar(const TorusGrid& grid);
SpinorField make_spinor(const TorusGrid& grid, int spinor_rank = 1);
ConnectionForm make_connection(const TorusGrid& grid);

/// Throws std::invalid_argument when the two fields disagree in shape.
void require_compatible(const Field& a, const Field& b, const std::string& what);

/// Weight 1/form_degree! applied to all tensor lanes in inner products.
double form_weight(const Field& f);

/// Replaces every value z by i*Im(z). Exact projection onto iR.
void project_imaginary_inplace(Field& f);

/// Largest |Re| over all sites and lanes; for checking i-valuedness.
double max_real_part(const Field& f);

// Tensor multi-index helpers (row-major, first index slowest, base n).
int tensor_flat_index(int n, const int* idx, int rank);
void tensor_unflatten(int n, int flat, int* idx, int rank);

// Elementwise arithmetic. Shapes must match.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, Field f);
Field operator*(Complex c, Field f);

}  // namespace swflow
