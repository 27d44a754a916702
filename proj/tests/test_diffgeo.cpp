#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "swflow/diffgeo.hpp"
#include "swflow/random_fields.hpp"

using namespace swflow;

namespace {

ScalarField fill_scalar(const TorusGrid& g,
                        const std::function<Complex(const std::vector<double>&)>& fn) {
  ScalarField f = make_scalar(g);
  std::vector<int> idx(g.n, 0);
  std::vector<double> x(g.n);
  for (std::int64_t row = 0; row < g.site_count(); ++row) {
    for (int a = 0; a < g.n; ++a) x[a] = g.coord(a, idx[a]);
    f.data(row, 0) = fn(x);
    for (int a = g.n - 1; a >= 0; --a) {
      if (++idx[a] < g.sizes[a]) break;
      idx[a] = 0;
    }
  }
  return f;
}

// A = i sin(x1) dx2 on T^2, the workhorse analytic connection.
ConnectionForm sine_connection(const TorusGrid& g) {
  ConnectionForm a = make_connection(g);
  ScalarField s = fill_scalar(g, [](const std::vector<double>& x) {
    return Complex(0.0, std::sin(x[0]));
  });
  a.data.col(1) = s.data.col(0);
  return a;
}

double rel_diff(const Field& a, const Field& b) {
  double scale = std::sqrt(l2_norm2(a)) + std::sqrt(l2_norm2(b)) + 1e-300;
  return std::sqrt(l2_norm2(a - b)) / scale;
}

}  // namespace

TEST_CASE("exterior_d: constants, symbolic curvature, d.d = 0") {
  TorusGrid g = make_grid(2, {16, 16});

  ScalarField c = fill_scalar(g, [](const std::vector<double>&) { return Complex(2.0, 1.0); });
  Field dc = exterior_d(c);
  CHECK(dc.data.abs().maxCoeff() < 1e-14);

  // A = i sin(x1) dx2 -> F = i cos(x1) dx1 ^ dx2
  ConnectionForm a = sine_connection(g);
  Field f = exterior_d(a);
  ScalarField cosx = fill_scalar(g, [](const std::vector<double>& x) {
    return Complex(0.0, std::cos(x[0]));
  });
  CHECK((f.data.col(1) - cosx.data.col(0)).abs().maxCoeff() < 1e-13);   // F_{12}
  CHECK((f.data.col(2) + cosx.data.col(0)).abs().maxCoeff() < 1e-13);   // F_{21}
  CHECK(f.data.col(0).abs().maxCoeff() < 1e-14);
  CHECK(f.data.col(3).abs().maxCoeff() < 1e-14);

  // d(d theta) = 0 for random band-limited theta
  Field theta = random_band_limited(g, 0, 1, 5, 31, 1.0);
  Field ddt = exterior_d(exterior_d(theta));
  CHECK(ddt.data.abs().maxCoeff() < 1e-12 * (1.0 + sup_norm(theta)));

  Field top = make_field(g, 2, 1, 2);
  CHECK_THROWS_AS(exterior_d(top), std::invalid_argument);
}

TEST_CASE("codifferential: harmonic forms, analytic Laplacian, adjointness oracle") {
  TorusGrid g = make_grid(2, {16, 16});

  ConnectionForm h = make_connection(g);
  h.data.col(0).setConstant(Complex(0.0, 0.4));
  CHECK(codifferential(h).data.abs().maxCoeff() < 1e-14);

  // d*(d theta) for theta = cos(x1) equals cos(x1)  (= -d1^2 theta)
  ScalarField theta = fill_scalar(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
  Field lap = codifferential(exterior_d(theta));
  CHECK(rel_diff(lap, theta) < 1e-13);

  // adjointness <d alpha, beta> = <alpha, d* beta> on random band-limited pairs
  for (std::uint64_t seed : {40ull, 41ull}) {
    Field alpha = random_band_limited(g, 0, 1, 5, seed, 1.0);
    Field beta = random_band_limited(g, 1, 1, 5, seed + 100, 1.0);
    beta.form_degree = 1;
    Complex lhs = l2_inner(exterior_d(alpha), beta);
    Complex rhs = l2_inner(alpha, codifferential(beta));
    CHECK(std::abs(lhs - rhs) < 1e-11 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
  // 1-form vs 2-form adjointness (form-weighted inner product)
  {
    Field alpha = random_band_limited(g, 1, 1, 5, 43, 1.0);
    alpha.form_degree = 1;
    Field beta = make_field(g, 2, 1, 2);
    Field raw = random_band_limited(g, 2, 1, 5, 44, 1.0);
    // antisymmetrize the random 2-tensor into an honest 2-form
    beta.data.col(1) = 0.5 * (raw.data.col(1) - raw.data.col(2));
    beta.data.col(2) = -beta.data.col(1);
    Complex lhs = l2_inner(exterior_d(alpha), beta);
    Complex rhs = l2_inner(alpha, codifferential(beta));
    CHECK(std::abs(lhs - rhs) < 1e-11 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }

  CHECK_THROWS_AS(codifferential(make_scalar(g)), std::invalid_argument);

  // d* d* = 0 on a 3-form (n = 3)
  TorusGrid g3 = make_grid(3, {8, 8, 8});
  Field w = make_field(g3, 2, 1, 2);
  Field raw = random_band_limited(g3, 2, 1, 2, 45, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int fl = i * 3 + j, lf = j * 3 + i;
      w.data.col(fl) = 0.5 * (raw.data.col(fl) - raw.data.col(lf));
    }
  Field dw = exterior_d(w);
  Field dsds = codifferential(codifferential(dw));
  CHECK(dsds.data.abs().maxCoeff() < 1e-12 * (1.0 + sup_norm(w)));
}

TEST_CASE("curvature: zero, pure gauge, symbolic") {
  TorusGrid g = make_grid(2, {16, 16});

  CHECK(sup_norm(curvature(make_connection(g))) == 0.0);

  // pure gauge A = i d theta has F = 0
  ScalarField theta = fill_scalar(g, [](const std::vector<double>& x) {
    return 0.3 * std::cos(x[0]) + 0.2 * std::sin(x[1]);
  });
  Field dtheta = exterior_d(theta);
  ConnectionForm a = make_connection(g);
  a.data = dtheta.data.real().cast<Complex>() * Complex(0.0, 1.0);
  CHECK(sup_norm(curvature(a)) < 1e-13);

  ConnectionForm sa = sine_connection(g);
  TwoForm f = curvature(sa);
  CHECK(f.purely_imaginary);
  CHECK(max_real_part(f) < 1e-14);
  // Bianchi dF = 0 needs 3-forms, so check on T^3
  TorusGrid g3 = make_grid(3, {8, 8, 8});
  ConnectionForm a3 = random_band_limited(g3, 1, 1, 2, 50, 1.0, true);
  Field df = exterior_d(curvature(a3));
  CHECK(df.data.abs().maxCoeff() < 1e-12 * (1.0 + sup_norm(a3)));
}

TEST_CASE("cov_deriv: analytic values and gauge covariance") {
  TorusGrid g = make_grid(2, {16, 16});
  ConnectionForm zero_a = make_connection(g);

  SpinorField c = make_spinor(g, 2);
  c.data.col(0).setConstant(Complex(1.0, 0.0));
  c.data.col(1).setConstant(Complex(0.0, -0.5));
  CHECK(sup_norm(cov_deriv(zero_a, c, false)) < 1e-14);

  // A = 0, phi = e^{i x1} c -> (i e^{i x1} c, 0)
  SpinorField phi = make_spinor(g, 1);
  phi.data.col(0) = fill_scalar(g, [](const std::vector<double>& x) {
                      return Complex(std::cos(x[0]), std::sin(x[0]));
                    }).data.col(0);
  Field dphi = cov_deriv(zero_a, phi, false);
  CHECK((dphi.data.col(0) - Complex(0.0, 1.0) * phi.data.col(0)).abs().maxCoeff() < 1e-13);
  CHECK(dphi.data.col(1).abs().maxCoeff() < 1e-14);

  // gauge covariance: D_{A + i d theta}(e^{-i theta} phi) = e^{-i theta} D_A phi.
  // The gauge factor spreads spectra by ~4 modes before its Bessel tail drops
  // below 1e-10, so the data must sit that far inside the 2/3-rule band.
  TorusGrid g32 = make_grid(2, {32, 32});
  ConnectionForm a = sine_connection(g32);
  SpinorField psi = random_band_limited(g32, 0, 2, 4, 60, 1.0);
  GaugePhase gp{fill_scalar(g32, [](const std::vector<double>& x) {
    return 0.05 * std::cos(x[0]) + 0.04 * std::sin(x[1] + 0.3);
  })};
  auto [a2, psi2] = gauge_transform(gp, a, psi);
  Field lhs = cov_deriv(a2, psi2, true);
  Field rhs = cov_deriv(a, psi, true);
  Eigen::ArrayXcd phase = gp.theta.data.col(0).real().unaryExpr(
      [](double v) { return Complex(std::cos(v), -std::sin(v)); });
  for (int l = 0; l < rhs.lanes(); ++l) rhs.data.col(l) *= phase;
  CHECK(rel_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("cov_deriv_adjoint: analytic divergence and duality oracle") {
  TorusGrid g = make_grid(2, {16, 16});
  ConnectionForm zero_a = make_connection(g);

  Field zt = make_field(g, 1, 2, 0);
  CHECK(sup_norm(cov_deriv_adjoint(zero_a, zt, false)) == 0.0);

  // A = 0: T = cos(x1) dx1 (x) c  ->  D* T = sin(x1) c
  Field t = make_field(g, 1, 1, 0);
  t.data.col(0) = fill_scalar(g, [](const std::vector<double>& x) { return std::cos(x[0]); })
                      .data.col(0);
  Field dst = cov_deriv_adjoint(zero_a, t, false);
  ScalarField sinx = fill_scalar(g, [](const std::vector<double>& x) { return std::sin(x[0]); });
  CHECK(rel_diff(dst, sinx) < 1e-13);

  // duality <D_A S, T> = <S, D_A^* T> on random band-limited pairs
  ConnectionForm a = sine_connection(g);
  for (bool dealias : {false, true}) {
    Field s = random_band_limited(g, 0, 2, 5, 70, 1.0);
    Field u = random_band_limited(g, 1, 2, 5, 71, 1.0);
    Complex lhs = l2_inner(cov_deriv(a, s, dealias), u);
    Complex rhs = l2_inner(s, cov_deriv_adjoint(a, u, dealias));
    CHECK(std::abs(lhs - rhs) < 1e-11 * (std::abs(lhs) + 1.0));
  }

  CHECK_THROWS_AS(cov_deriv_adjoint(zero_a, make_spinor(g, 1), false), std::invalid_argument);
}

TEST_CASE("iterated covariant derivative: identity, symbolic second derivative, duality") {
  TorusGrid g = make_grid(2, {16, 16});
  ConnectionForm zero_a = make_connection(g);
  SpinorField phi = make_spinor(g, 1);
  phi.data.col(0) = fill_scalar(g, [](const std::vector<double>& x) {
                      return Complex(std::cos(x[0]), std::sin(x[0]));
                    }).data.col(0);

  Field same = iterated_cov_deriv(zero_a, phi, 0, false);
  CHECK((same.data == phi.data).all());

  // m = 2, A = 0: (1,1) component is -e^{i x1}, every other component 0
  Field d2 = iterated_cov_deriv(zero_a, phi, 2, false);
  CHECK((d2.data.col(0) + phi.data.col(0)).abs().maxCoeff() < 1e-12);
  for (int l = 1; l < 4; ++l) CHECK(d2.data.col(l).abs().maxCoeff() < 1e-12);

  ConnectionForm a = sine_connection(g);
  for (int m : {1, 2, 3}) {
    Field s = random_band_limited(g, 0, 1, 4, 80 + m, 1.0);
    Field u = random_band_limited(g, m, 1, 4, 90 + m, 1.0);
    Complex lhs = l2_inner(iterated_cov_deriv(a, s, m, true), u);
    Complex rhs = l2_inner(s, iterated_cov_adjoint(a, u, m, true));
    CHECK(std::abs(lhs - rhs) < 1e-10 * (std::abs(lhs) + 1.0));
  }
}

TEST_CASE("hodge and bochner laplacians agree on the flat torus") {
  TorusGrid g = make_grid(2, {16, 16});

  ConnectionForm h = make_connection(g);
  h.data.col(0).setConstant(Complex(0.2, 0.0));
  CHECK(sup_norm(hodge_laplacian(h)) < 1e-13);
  CHECK(sup_norm(bochner_laplacian(h)) < 1e-13);

  // omega = cos(x1) dx2 -> cos(x1) dx2 for both
  Field w = make_field(g, 1, 1, 1);
  w.data.col(1) = fill_scalar(g, [](const std::vector<double>& x) { return std::cos(x[0]); })
                      .data.col(0);
  CHECK(rel_diff(hodge_laplacian(w), w) < 1e-13);
  CHECK(rel_diff(bochner_laplacian(w), w) < 1e-13);

  // random band-limited forms of degree 0, 1, 2 (degree 2 on T^3)
  Field f0 = random_band_limited(g, 0, 1, 5, 100, 1.0);
  CHECK(rel_diff(hodge_laplacian(f0), bochner_laplacian(f0)) < 1e-11);
  Field f1 = random_band_limited(g, 1, 1, 5, 101, 1.0);
  f1.form_degree = 1;
  CHECK(rel_diff(hodge_laplacian(f1), bochner_laplacian(f1)) < 1e-11);

  TorusGrid g3 = make_grid(3, {8, 8, 8});
  Field raw = random_band_limited(g3, 2, 1, 2, 102, 1.0);
  Field f2 = make_field(g3, 2, 1, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      f2.data.col(i * 3 + j) = 0.5 * (raw.data.col(i * 3 + j) - raw.data.col(j * 3 + i));
  CHECK(rel_diff(hodge_laplacian(f2), bochner_laplacian(f2)) < 1e-11);
}

TEST_CASE("gauge_transform: identity, constant phase, modulus preservation, curvature invariance") {
  TorusGrid g = make_grid(2, {16, 16});
  ConnectionForm a = sine_connection(g);
  SpinorField phi = random_band_limited(g, 0, 2, 4, 110, 1.0);

  auto [a0, phi0] = gauge_transform(zero_gauge(g), a, phi);
  CHECK((a0.data == a.data).all());
  CHECK((phi0.data == phi.data).all());

  GaugePhase cg{make_scalar(g)};
  cg.theta.data.setConstant(Complex(0.7, 0.0));
  auto [a1, phi1] = gauge_transform(cg, a, phi);
  CHECK((a1.data - a.data).abs().maxCoeff() < 1e-14);
  Complex rot(std::cos(0.7), -std::sin(0.7));
  CHECK((phi1.data - rot * phi.data).abs().maxCoeff() < 1e-13);

  GaugePhase gp{make_scalar(g)};
  gp.theta = random_band_limited(g, 0, 1, 3, 111, 0.4);
  gp.theta.data.col(0) = gp.theta.data.col(0).real().cast<Complex>();
  auto [a2, phi2] = gauge_transform(gp, a, phi);
  // |phi'| = |phi| pointwise exactly (unit modulus phase)
  CHECK((pointwise_norm2(phi2) - pointwise_norm2(phi)).abs().maxCoeff() <
        1e-14 * (1.0 + pointwise_norm2(phi).maxCoeff()));
  CHECK(a2.purely_imaginary);
  CHECK(max_real_part(a2) == 0.0);
  CHECK(rel_diff(curvature(a2), curvature(a)) < 1e-11);
}

TEST_CASE("gauge covariance chain up to m = 4") {
  // Band budget: k_phi + m * k_A + 4 * k_theta <= K = 10 keeps every product
  // resolved until the gauge factor's Bessel tail (~1e-10) takes over.
  TorusGrid g = make_grid(2, {32, 32});
  ConnectionForm a = random_band_limited(g, 1, 1, 1, 120, 0.8, true);
  SpinorField phi = random_band_limited(g, 0, 1, 2, 121, 1.0);
  GaugePhase gp{make_scalar(g)};
  gp.theta = random_band_limited(g, 0, 1, 1, 122, 0.05);
  gp.theta.data.col(0) = gp.theta.data.col(0).real().cast<Complex>();
  auto [a2, phi2] = gauge_transform(gp, a, phi);

  Eigen::ArrayXcd phase = gp.theta.data.col(0).real().unaryExpr(
      [](double v) { return Complex(std::cos(v), -std::sin(v)); });
  for (int m = 1; m <= 4; ++m) {
    Field lhs = iterated_cov_deriv(a2, phi2, m, true);
    Field rhs = iterated_cov_deriv(a, phi, m, true);
    for (int l = 0; l < rhs.lanes(); ++l) rhs.data.col(l) *= phase;
    double denom = l2_norm(rhs) + 1e-300;
    CHECK(l2_norm(lhs - rhs) / denom < 1e-9);
  }
}

TEST_CASE("coulomb_project: fixed point, pure gauge, random divergence removal") {
  TorusGrid g = make_grid(2, {16, 16});

  // A = i sin(x2) dx1 is already Coulomb: d*A = -d1 sin(x2) = 0
  ConnectionForm ac = make_connection(g);
  ac.data.col(0) = fill_scalar(g, [](const std::vector<double>& x) {
                     return Complex(0.0, std::sin(x[1]));
                   }).data.col(0);
  CoulombResult r0 = coulomb_project(ac);
  CHECK(sup_norm(r0.gauge.theta) < 1e-13);
  CHECK((r0.a_coul.data - ac.data).abs().maxCoeff() < 1e-12);

  // pure gauge plus harmonic part: projection keeps only the mean piece
  ScalarField theta0 = fill_scalar(g, [](const std::vector<double>& x) {
    return 0.4 * std::sin(x[0]) + 0.3 * std::cos(x[1]);
  });
  Field dtheta = exterior_d(theta0);
  ConnectionForm a = make_connection(g);
  a.data = dtheta.data.real().cast<Complex>() * Complex(0.0, 1.0);
  a.data.col(0) += Complex(0.0, 0.25);  // harmonic (constant) piece
  CoulombResult r1 = coulomb_project(a);
  ConnectionForm harmonic = make_connection(g);
  harmonic.data.col(0).setConstant(Complex(0.0, 0.25));
  CHECK(rel_diff(r1.a_coul, harmonic) < 1e-12);

  // random connections: d*-free to 1e-10, curvature preserved to 1e-11
  for (std::uint64_t seed : {130ull, 131ull, 132ull}) {
    ConnectionForm ar = random_band_limited(g, 1, 1, 5, seed, 1.0, true);
    CoulombResult rr = coulomb_project(ar);
    CHECK(l2_norm(codifferential(rr.a_coul)) < 1e-10);
    CHECK(l2_norm(curvature(rr.a_coul) - curvature(ar)) <
          1e-11 * (1.0 + l2_norm(curvature(ar))));
    CHECK(max_real_part(rr.a_coul) == 0.0);
  }
}

TEST_CASE("commutator_defect vanishes to dealiased spectral accuracy") {
  TorusGrid g = make_grid(2, {32, 32});

  // A = 0: partial derivatives commute
  ConnectionForm zero_a = make_connection(g);
  SpinorField phi = random_band_limited(g, 0, 1, 6, 140, 1.0);
  CHECK(sup_norm(commutator_defect(zero_a, phi, 0, 1, true)) < 1e-12);

  // A = i sin(x1) dx2, band-limited phi
  ConnectionForm a = sine_connection(g);
  SpinorField psi = random_band_limited(g, 0, 2, 6, 141, 1.0);
  CHECK(sup_norm(commutator_defect(a, psi, 0, 1, true)) < 1e-9);

  // pure gauge A (F = 0)
  ScalarField theta0 = fill_scalar(g, [](const std::vector<double>& x) {
    return 0.5 * std::sin(x[0] + 0.2) + 0.3 * std::cos(x[1]);
  });
  Field dtheta = exterior_d(theta0);
  ConnectionForm ag = make_connection(g);
  ag.data = dtheta.data.real().cast<Complex>() * Complex(0.0, 1.0);
  CHECK(sup_norm(commutator_defect(ag, psi, 0, 1, true)) < 1e-9);

  CHECK_THROWS_AS(commutator_defect(a, psi, 1, 1, true), std::invalid_argument);
}
