#include "swflow/diffgeo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace swflow {

GaugePhase zero_gauge(const TorusGrid& grid) { return GaugePhase{make_scalar(grid)}; }

Field exterior_d(const Field& w) {
  if (w.form_degree != w.rank)
    throw std::invalid_argument("exterior_d: input must be a differential form");
  if (w.rank >= w.grid.n)
    throw std::invalid_argument("exterior_d: no (n+1)-forms on an n-torus");
  const int n = w.grid.n;
  const int r = w.spinor_rank;
  const int j = w.rank;
  Field parts = partials_prepend(w);  // lanes (a, multi)
  Field out = make_field(w.grid, j + 1, r, j + 1);
  out.purely_imaginary = w.purely_imaginary;

  std::vector<int> multi(j + 1), sub(j > 0 ? j : 1);
  const int out_tensors = out.tensor_count();
  for (int flat = 0; flat < out_tensors; ++flat) {
    tensor_unflatten(n, flat, multi.data(), j + 1);
    auto dst = out.data.middleCols(static_cast<Eigen::Index>(flat) * r, r);
    for (int m = 0; m <= j; ++m) {
      int p = 0;
      for (int q = 0; q <= j; ++q)
        if (q != m) sub[p++] = multi[q];
      int src_flat = multi[m];
      if (j > 0) src_flat = multi[m] * w.tensor_count() + tensor_flat_index(n, sub.data(), j);
      auto src = parts.data.middleCols(static_cast<Eigen::Index>(src_flat) * r, r);
      if (m % 2 == 0)
        dst += src;
      else
        dst -= src;
    }
  }
  return out;
}

Field codifferential(const Field& w) {
  if (w.form_degree != w.rank || w.rank < 1)
    throw std::invalid_argument("codifferential: input must be a form of degree >= 1");
  Field out = div_first(w);
  out.data = -out.data;
  return out;
}

TwoForm curvature(const ConnectionForm& a) {
  if (a.rank != 1 || a.spinor_rank != 1)
    throw std::invalid_argument("curvature: input must be a 1-form");
  if (a.grid.n == 1) {
    // no 2-forms on the circle: F_A vanishes identically
    Field zero = make_field(a.grid, 2, 1, 2);
    zero.purely_imaginary = true;
    return zero;
  }
  Field f = exterior_d(a);
  f.purely_imaginary = true;
  return f;
}

Field cov_deriv(const ConnectionForm& a, const Field& t, bool dealias) {
  if (a.rank != 1 || a.spinor_rank != 1)
    throw std::invalid_argument("cov_deriv: connection must be a 1-form");
  if (!a.grid.same_layout(t.grid))
    throw std::invalid_argument("cov_deriv: grid mismatch");
  Field out = partials_prepend(t);
  out.purely_imaginary = false;
  const int n = t.grid.n;
  const int L = t.lanes();
  Field prods = make_field(t.grid, t.rank + 1, t.spinor_rank, t.form_degree);
  for (int ax = 0; ax < n; ++ax) {
    for (int l = 0; l < L; ++l)
      prods.data.col(static_cast<Eigen::Index>(ax) * L + l) = a.data.col(ax) * t.data.col(l);
  }
  if (dealias) dealias_inplace(prods);
  out.data += prods.data;
  return out;
}

Field cov_deriv_adjoint(const ConnectionForm& a, const Field& u, bool dealias) {
  if (u.rank < 1) throw std::invalid_argument("cov_deriv_adjoint: rank must be >= 1");
  if (u.rank - 1 < u.form_degree)
    throw std::invalid_argument("cov_deriv_adjoint: first index lies in the form block");
  if (!a.grid.same_layout(u.grid))
    throw std::invalid_argument("cov_deriv_adjoint: grid mismatch");
  Field out = div_first(u);
  out.data = -out.data;
  out.purely_imaginary = false;
  const int n = u.grid.n;
  const int L = out.lanes();
  // The exact adjoint of "multiply then truncate" is "truncate then multiply".
  Field ublocks = u;
  if (dealias) dealias_inplace(ublocks);
  for (int ax = 0; ax < n; ++ax) {
    for (int l = 0; l < L; ++l)
      out.data.col(l) -= a.data.col(ax) * ublocks.data.col(static_cast<Eigen::Index>(ax) * L + l);
  }
  return out;
}

Field iterated_cov_deriv(const ConnectionForm& a, const Field& t, int m, bool dealias) {
  if (m < 0) throw std::invalid_argument("iterated_cov_deriv: m must be >= 0");
  Field cur = t;
  for (int j = 0; j < m; ++j) cur = cov_deriv(a, cur, dealias);
  return cur;
}

Field iterated_cov_adjoint(const ConnectionForm& a, const Field& u, int m, bool dealias) {
  if (m < 0) throw std::invalid_argument("iterated_cov_adjoint: m must be >= 0");
  Field cur = u;
  for (int j = 0; j < m; ++j) cur = cov_deriv_adjoint(a, cur, dealias);
  return cur;
}

Field hodge_laplacian(const Field& w) {
  if (w.form_degree != w.rank)
    throw std::invalid_argument("hodge_laplacian: input must be a differential form");
  if (w.rank == 0) return codifferential(exterior_d(w));
  if (w.rank == w.grid.n) return exterior_d(codifferential(w));
  return exterior_d(codifferential(w)) + codifferential(exterior_d(w));
}

Field bochner_laplacian(const Field& w) { return laplacian_pow(w, 1); }

std::pair<ConnectionForm, SpinorField> gauge_transform(const GaugePhase& g,
                                                       const ConnectionForm& a,
                                                       const SpinorField& phi) {
  if (!g.theta.grid.same_layout(a.grid) || !a.grid.same_layout(phi.grid))
    throw std::invalid_argument("gauge_transform: grid mismatch");
  Field dtheta = partials_prepend(g.theta);
  ConnectionForm a2 = a;
  for (int ax = 0; ax < a.grid.n; ++ax)
    a2.data.col(ax) += Complex(0.0, 1.0) * dtheta.data.col(ax).real().cast<Complex>();
  a2.purely_imaginary = a.purely_imaginary;

  SpinorField phi2 = phi;
  Eigen::ArrayXd th = g.theta.data.col(0).real();
  Eigen::ArrayXcd phase =
      th.unaryExpr([](double v) { return Complex(std::cos(v), -std::sin(v)); });
  for (int s = 0; s < phi.spinor_rank; ++s) phi2.data.col(s) *= phase;
  return {a2, phi2};
}

CoulombResult coulomb_project(const ConnectionForm& a) {
  if (a.rank != 1 || a.spinor_rank != 1)
    throw std::invalid_argument("coulomb_project: input must be a 1-form");
  const TorusGrid& g = a.grid;
  // Solve Delta theta = -d*(Im A); the zero/Nyquist-only modes carry no d*A
  // content and stay untouched (harmonic part of A is gauge-invariant data).
  ScalarField rhs = codifferential(a);  // i * d*(Im A) up to roundoff
  ScalarField theta = make_scalar(g);
  theta.data.col(0) = rhs.data.col(0).imag().cast<Complex>() * (-1.0);
  to_spectral_inplace(theta);
  std::vector<int> idx(g.n, 0);
  const std::int64_t sites = g.site_count();
  for (std::int64_t row = 0; row < sites; ++row) {
    double xi2 = 0.0;
    for (int ax = 0; ax < g.n; ++ax) {
      double f = deriv_freq(g, ax, idx[ax]);
      xi2 += f * f;
    }
    theta.data(row, 0) = xi2 > 0.0 ? theta.data(row, 0) / xi2 : Complex(0.0, 0.0);
    for (int ax = g.n - 1; ax >= 0; --ax) {
      if (++idx[ax] < g.sizes[ax]) break;
      idx[ax] = 0;
    }
  }
  to_physical_inplace(theta);
  theta.data.col(0) = theta.data.col(0).real().cast<Complex>();

  GaugePhase phase{theta};
  SpinorField dummy = make_spinor(g, 1);
  auto [a_coul, ignored] = gauge_transform(phase, a, dummy);
  (void)ignored;
  return {a_coul, phase};
}

SpinorField commutator_defect(const ConnectionForm& a, const SpinorField& phi, int i,
                              int j, bool dealias) {
  if (i == j) throw std::invalid_argument("commutator_defect: need i != j");
  const int n = a.grid.n;
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("commutator_defect: axis out of range");
  const int r = phi.spinor_rank;
  Field d1 = cov_deriv(a, phi, dealias);
  Field d2 = cov_deriv(a, d1, dealias);
  TwoForm f = curvature(a);

  SpinorField out = make_spinor(a.grid, r);
  const int flat_ij = i * n + j;
  const int flat_ji = j * n + i;
  out.data = d2.data.middleCols(static_cast<Eigen::Index>(flat_ij) * r, r) -
             d2.data.middleCols(static_cast<Eigen::Index>(flat_ji) * r, r);

  SpinorField fphi = make_spinor(a.grid, r);
  for (int s = 0; s < r; ++s) fphi.data.col(s) = f.data.col(flat_ij) * phi.data.col(s);
  if (dealias) dealias_inplace(fphi);
  out.data -= fphi.data;
  return out;
}

Field contract_trailing(const Field& u, const Field& t) {
  if (u.rank != t.rank + 1 || u.spinor_rank != t.spinor_rank ||
      !u.grid.same_layout(t.grid))
    throw std::invalid_argument("contract_trailing: shapes do not chain");
  const int n = u.grid.n;
  const int lt = t.lanes();
  Field out = make_field(u.grid, 1, 1, 1);
  for (int ax = 0; ax < n; ++ax) {
    Eigen::ArrayXcd acc = Eigen::ArrayXcd::Zero(u.data.rows());
    for (int l = 0; l < lt; ++l)
      acc += u.data.col(static_cast<Eigen::Index>(ax) * lt + l) * t.data.col(l).conjugate();
    out.data.col(ax) = acc;
  }
  return out;
}

}  // namespace swflow
