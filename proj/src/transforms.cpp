#include "swflow/transforms.hpp"

#include <unsupported/Eigen/FFT>

#include <stdexcept>
#include <vector>

namespace swflow {

namespace {

// 1-D FFT along one axis of every lane, in place. Lines are gathered into a
// contiguous buffer (stride = product of the faster axes).
void fft_axis(Eigen::ArrayXXcd& data, const TorusGrid& g, int axis, bool inverse) {
  const int N = g.sizes[axis];
  const std::int64_t stride = g.stride(axis);
  const std::int64_t sites = g.site_count();
  const std::int64_t block = static_cast<std::int64_t>(N) * stride;
  const std::int64_t outer = sites / block;

  Eigen::FFT<double> fft;
  Eigen::VectorXcd in(N), out(N);
  for (Eigen::Index lane = 0; lane < data.cols(); ++lane) {
    Complex* col = data.col(lane).data();
    for (std::int64_t o = 0; o < outer; ++o) {
      for (std::int64_t i = 0; i < stride; ++i) {
        Complex* base = col + o * block + i;
        for (int j = 0; j < N; ++j) in[j] = base[j * stride];
        if (inverse)
          fft.inv(out, in);
        else
          fft.fwd(out, in);
        for (int j = 0; j < N; ++j) base[j * stride] = out[j];
      }
    }
  }
}

// Visits FFT bins in storage order; idx holds the per-axis bin indices.
template <class Fn>
void for_each_mode(const TorusGrid& g, Fn&& fn) {
  std::vector<int> idx(g.n, 0);
  const std::int64_t sites = g.site_count();
  for (std::int64_t row = 0; row < sites; ++row) {
    fn(row, idx.data());
    for (int a = g.n - 1; a >= 0; --a) {
      if (++idx[a] < g.sizes[a]) break;
      idx[a] = 0;
    }
  }
}

int signed_bin(int index, int N) { return index <= N / 2 ? index : index - N; }

std::vector<std::vector<double>> deriv_tables(const TorusGrid& g) {
  std::vector<std::vector<double>> dfreq(g.n);
  for (int a = 0; a < g.n; ++a) {
    dfreq[a].resize(g.sizes[a]);
    for (int i = 0; i < g.sizes[a]; ++i) dfreq[a][i] = deriv_freq(g, a, i);
  }
  return dfreq;
}

}  // namespace

int dealias_kmax(const TorusGrid& grid, int axis) { return (grid.sizes[axis] - 1) / 3; }

double mode_freq(const TorusGrid& grid, int axis, int index) {
  return kTwoPi * signed_bin(index, grid.sizes[axis]) / grid.lengths[axis];
}

double deriv_freq(const TorusGrid& grid, int axis, int index) {
  const int N = grid.sizes[axis];
  if (index == N / 2) return 0.0;  // Nyquist bin: keeps the derivative skew-adjoint
  return kTwoPi * signed_bin(index, N) / grid.lengths[axis];
}

void to_spectral_inplace(Field& f) {
  for (int a = 0; a < f.grid.n; ++a) fft_axis(f.data, f.grid, a, false);
  f.data /= static_cast<double>(f.grid.site_count());
}

void to_physical_inplace(Field& f) {
  for (int a = 0; a < f.grid.n; ++a) fft_axis(f.data, f.grid, a, true);
  f.data *= static_cast<double>(f.grid.site_count());
}

Field to_spectral(Field f) {
  to_spectral_inplace(f);
  return f;
}

Field to_physical(Field f) {
  to_physical_inplace(f);
  return f;
}

Field spectral_partial(const Field& f, int axis) {
  if (axis < 0 || axis >= f.grid.n)
    throw std::invalid_argument("spectral_partial: axis out of range");
  Field out = to_spectral(f);
  const TorusGrid& g = out.grid;
  std::vector<std::vector<double>> dfreq = deriv_tables(g);
  for_each_mode(g, [&](std::int64_t row, const int* idx) {
    out.data.row(row) *= Complex(0.0, dfreq[axis][idx[axis]]);
  });
  to_physical_inplace(out);
  return out;
}

Field partials_prepend(const Field& f) {
  const TorusGrid& g = f.grid;
  Field spec = to_spectral(f);
  Field out = make_field(g, f.rank + 1, f.spinor_rank, f.form_degree);
  out.purely_imaginary = f.purely_imaginary;
  const int L = f.lanes();
  std::vector<std::vector<double>> dfreq = deriv_tables(g);
  for (int a = 0; a < g.n; ++a) {
    auto block = out.data.middleCols(static_cast<Eigen::Index>(a) * L, L);
    block = spec.data;
    for_each_mode(g, [&](std::int64_t row, const int* idx) {
      block.row(row) *= Complex(0.0, dfreq[a][idx[a]]);
    });
  }
  to_physical_inplace(out);
  return out;
}

Field div_first(const Field& f) {
  if (f.rank < 1) throw std::invalid_argument("div_first: rank must be >= 1");
  const TorusGrid& g = f.grid;
  Field spec = to_spectral(f);
  Field out = make_field(g, f.rank - 1, f.spinor_rank,
                         f.form_degree > f.rank - 1 ? f.rank - 1 : f.form_degree);
  out.purely_imaginary = f.purely_imaginary;
  const int L = out.lanes();
  std::vector<std::vector<double>> dfreq = deriv_tables(g);
  for (int a = 0; a < g.n; ++a) {
    auto block = spec.data.middleCols(static_cast<Eigen::Index>(a) * L, L);
    for_each_mode(g, [&](std::int64_t row, const int* idx) {
      out.data.row(row) += Complex(0.0, dfreq[a][idx[a]]) * block.row(row);
    });
  }
  to_physical_inplace(out);
  return out;
}

void dealias_inplace(Field& f) {
  const TorusGrid& g = f.grid;
  to_spectral_inplace(f);
  std::vector<int> kmax(g.n);
  for (int a = 0; a < g.n; ++a) kmax[a] = dealias_kmax(g, a);
  for_each_mode(g, [&](std::int64_t row, const int* idx) {
    for (int a = 0; a < g.n; ++a) {
      int s = signed_bin(idx[a], g.sizes[a]);
      if (s > kmax[a] || -s > kmax[a]) {
        f.data.row(row).setZero();
        return;
      }
    }
  });
  to_physical_inplace(f);
}

Field dealiased(Field f) {
  dealias_inplace(f);
  return f;
}

Field laplacian_pow(const Field& f, int power) {
  if (power < 0) throw std::invalid_argument("laplacian_pow: power must be >= 0");
  if (power == 0) return f;
  const TorusGrid& g = f.grid;
  Field out = to_spectral(f);
  std::vector<std::vector<double>> dfreq = deriv_tables(g);
  for_each_mode(g, [&](std::int64_t row, const int* idx) {
    double xi2 = 0.0;
    for (int a = 0; a < g.n; ++a) xi2 += dfreq[a][idx[a]] * dfreq[a][idx[a]];
    double m = 1.0;
    for (int j = 0; j < power; ++j) m *= xi2;
    out.data.row(row) *= m;
  });
  to_physical_inplace(out);
  return out;
}

Field shifted(const Field& f, const std::vector<double>& offset) {
  if (static_cast<int>(offset.size()) != f.grid.n)
    throw std::invalid_argument("shifted: offset must have one entry per axis");
  const TorusGrid& g = f.grid;
  Field out = to_spectral(f);
  std::vector<std::vector<Complex>> phase(g.n);
  for (int a = 0; a < g.n; ++a) {
    phase[a].resize(g.sizes[a]);
    for (int i = 0; i < g.sizes[a]; ++i) {
      double arg = mode_freq(g, a, i) * offset[a];
      phase[a][i] = Complex(std::cos(arg), std::sin(arg));
    }
  }
  for_each_mode(g, [&](std::int64_t row, const int* idx) {
    Complex p(1.0, 0.0);
    for (int a = 0; a < g.n; ++a) p *= phase[a][idx[a]];
    out.data.row(row) *= p;
  });
  to_physical_inplace(out);
  return out;
}

}  // namespace swflow
