#include "swflow/field.hpp"

#include <stdexcept>

namespace swflow {

Field make_field(const TorusGrid& grid, int rank, int spinor_rank, int form_degree) {
  if (rank < 0) throw std::invalid_argument("make_field: rank must be >= 0");
  if (spinor_rank < 1) throw std::invalid_argument("make_field: spinor_rank must be >= 1");
  if (form_degree < 0 || form_degree > rank)
    throw std::invalid_argument("make_field: form_degree must lie in [0, rank]");
  Field f;
  f.grid = grid;
  f.rank = rank;
  f.spinor_rank = spinor_rank;
  f.form_degree = form_degree;
  f.data = Eigen::ArrayXXcd::Zero(grid.site_count(), f.lanes());
  return f;
}

ScalarField make_scalar(const TorusGrid& grid) { return make_field(grid, 0, 1, 0); }

SpinorField make_spinor(const TorusGrid& grid, int spinor_rank) {
  return make_field(grid, 0, spinor_rank, 0);
}

ConnectionForm make_connection(const TorusGrid& grid) {
  Field f = make_field(grid, 1, 1, 1);
  f.purely_imaginary = true;
  return f;
}

void require_compatible(const Field& a, const Field& b, const std::string& what) {
  if (!a.compatible(b)) throw std::invalid_argument(what + ": field shapes do not match");
}

double form_weight(const Field& f) {
  double w = 1.0;
  for (int j = 2; j <= f.form_degree; ++j) w /= j;
  return w;
}

void project_imaginary_inplace(Field& f) {
  f.data = f.data.imag().cast<Complex>() * Complex(0.0, 1.0);
  f.purely_imaginary = true;
}

double max_real_part(const Field& f) {
  if (f.data.size() == 0) return 0.0;
  return f.data.real().abs().maxCoeff();
}

int tensor_flat_index(int n, const int* idx, int rank) {
  int flat = 0;
  for (int j = 0; j < rank; ++j) flat = flat * n + idx[j];
  return flat;
}

void tensor_unflatten(int n, int flat, int* idx, int rank) {
  for (int j = rank - 1; j >= 0; --j) {
    idx[j] = flat % n;
    flat /= n;
  }
}

Field operator+(const Field& a, const Field& b) {
  require_compatible(a, b, "operator+");
  Field out = a;
  out.data += b.data;
  out.purely_imaginary = a.purely_imaginary && b.purely_imaginary;
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_compatible(a, b, "operator-");
  Field out = a;
  out.data -= b.data;
  out.purely_imaginary = a.purely_imaginary && b.purely_imaginary;
  return out;
}

Field operator*(double c, Field f) {
  f.data *= c;
  return f;
}

Field operator*(Complex c, Field f) {
  f.data *= c;
  f.purely_imaginary = f.purely_imaginary && c.imag() == 0.0;
  return f;
}

}  // namespace swflow
