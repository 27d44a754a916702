#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "swflow/bump.hpp"
#include "swflow/norms.hpp"
#include "swflow/random_fields.hpp"
#include "swflow/snapshot.hpp"
#include "swflow/transforms.hpp"

using namespace swflow;

namespace {

// Fills a scalar field from a coordinate function (test-side oracle helper).
ScalarField fill_scalar(const TorusGrid& g, const std::function<Complex(const std::vector<double>&)>& fn) {
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

double max_abs_diff(const Field& a, const Field& b) {
  return (a.data - b.data).abs().maxCoeff();
}

}  // namespace

TEST_CASE("make_grid basics and contract violations") {
  TorusGrid g = make_grid(2, {16, 16});
  CHECK(g.cell_volume() == doctest::Approx(std::pow(kTwoPi / 16, 2)).epsilon(1e-15));
  CHECK(g.volume() == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-15));

  TorusGrid g1 = make_grid(1, {4}, {1.0});
  CHECK(g1.cell_volume() == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(make_grid(2, {15, 16}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, {2, 16}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, {16, 16}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(7, {4, 4, 4, 4, 4, 4, 4}), std::invalid_argument);
}

TEST_CASE("spectral_partial: constants, resolved modes, analytic oracle") {
  TorusGrid g = make_grid(2, {16, 16});

  ScalarField c = fill_scalar(g, [](const std::vector<double>&) { return Complex(3.0, -1.0); });
  Field dc = spectral_partial(c, 0);
  CHECK(dc.data.abs().maxCoeff() < 1e-14);

  // f = exp(i x1) -> i f
  ScalarField e = fill_scalar(g, [](const std::vector<double>& x) {
    return Complex(std::cos(x[0]), std::sin(x[0]));
  });
  Field de = spectral_partial(e, 0);
  Field ie = e;
  ie.data *= Complex(0.0, 1.0);
  CHECK(max_abs_diff(de, ie) < 1e-13);

  // f = sin(x1) -> cos(x1)
  ScalarField s = fill_scalar(g, [](const std::vector<double>& x) { return std::sin(x[0]); });
  ScalarField cs = fill_scalar(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
  CHECK(max_abs_diff(spectral_partial(s, 0), cs) < 1e-13);

  CHECK_THROWS_AS(spectral_partial(s, 2), std::invalid_argument);
}

TEST_CASE("spectral_partial zeroes the Nyquist derivative mode") {
  TorusGrid g = make_grid(1, {8});
  // pure Nyquist mode cos(4 x) on an 8-point period-2pi grid alternates +-1
  ScalarField f = make_scalar(g);
  for (int i = 0; i < 8; ++i) f.data(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
  Field df = spectral_partial(f, 0);
  CHECK(df.data.abs().maxCoeff() < 1e-14);

  // and the derivative is skew-adjoint: <df, h> = -<f, dh> for any f, h
  TorusGrid g2 = make_grid(2, {8, 8});
  Field a = random_band_limited(g2, 0, 1, 2, 61, 1.0);
  Field b = random_band_limited(g2, 0, 1, 2, 62, 1.0);
  Complex lhs = l2_inner(spectral_partial(a, 0), b);
  Complex rhs = -l2_inner(a, spectral_partial(b, 0));
  CHECK(std::abs(lhs - rhs) < 1e-13 * (1.0 + std::abs(lhs)));
}

TEST_CASE("l2_inner is conjugate-linear in the second slot") {
  TorusGrid g = make_grid(2, {8, 8});
  Field f = random_band_limited(g, 0, 2, 2, 63, 1.0);
  Field h = random_band_limited(g, 0, 2, 2, 64, 1.0);
  Complex c(0.3, -0.8);
  Complex lhs = l2_inner(f, c * h);
  Complex rhs = std::conj(c) * l2_inner(f, h);
  CHECK(std::abs(lhs - rhs) < 1e-13 * (1.0 + std::abs(rhs)));
}

TEST_CASE("spectral_partial linearity and commuting axes (property)") {
  TorusGrid g = make_grid(2, {16, 16});
  Field f = random_band_limited(g, 0, 1, 5, 11, 1.0);
  Field h = random_band_limited(g, 0, 1, 5, 12, 1.0);

  Field lhs = f + h;
  lhs.data *= Complex(0.5, 0.25);
  Field d_lhs = spectral_partial(lhs, 0);
  Field rhs = spectral_partial(f, 0) + spectral_partial(h, 0);
  rhs.data *= Complex(0.5, 0.25);
  CHECK(max_abs_diff(d_lhs, rhs) < 1e-12 * (1.0 + sup_norm(f)));

  Field dxy = spectral_partial(spectral_partial(f, 0), 1);
  Field dyx = spectral_partial(spectral_partial(f, 1), 0);
  double scale = sup_norm(dxy) + 1.0;
  CHECK(max_abs_diff(dxy, dyx) / scale < 1e-12);
}

TEST_CASE("l2_inner: zero, positivity, analytic constant") {
  TorusGrid g = make_grid(2, {8, 8});
  Field z = make_spinor(g, 2);
  Field f = random_band_limited(g, 0, 2, 2, 3, 1.0);
  CHECK(std::abs(l2_inner(z, f)) == 0.0);
  CHECK(l2_inner(f, f).real() > 0.0);
  CHECK(std::abs(l2_inner(f, f).imag()) < 1e-14 * l2_inner(f, f).real());

  Complex cval(0.7, -0.3);
  ScalarField c = fill_scalar(g, [&](const std::vector<double>&) { return cval; });
  double expect = std::norm(cval) * kTwoPi * kTwoPi;
  CHECK(l2_inner(c, c).real() == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("Parseval identity for random fields (property)") {
  TorusGrid g = make_grid(2, {16, 16});
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Field f = random_band_limited(g, 1, 2, 5, seed, 1.3);
    double phys = l2_inner(f, f).real();
    Field s = to_spectral(f);
    double spec = s.data.abs2().sum() * g.volume() * form_weight(f);
    CHECK(std::fabs(phys - spec) <= 1e-12 * phys);
  }
}

TEST_CASE("lp_norm and sup_norm") {
  TorusGrid g = make_grid(2, {16, 16});
  Field z = make_spinor(g, 1);
  CHECK(lp_norm(z, 2.0) == 0.0);
  CHECK(sup_norm(z) == 0.0);

  Complex cval(0.5, 0.5);
  ScalarField c = fill_scalar(g, [&](const std::vector<double>&) { return cval; });
  CHECK(lp_norm(c, 2.0) ==
        doctest::Approx(std::abs(cval) * std::sqrt(g.volume())).epsilon(1e-13));
  CHECK(sup_norm(c) == doctest::Approx(std::abs(cval)).epsilon(1e-14));

  // ||cos(x1)||_{L2}^2 = 2 pi^2 on T^2
  ScalarField cs = fill_scalar(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
  CHECK(lp_norm(cs, 2.0) == doctest::Approx(std::sqrt(2.0 * M_PI * M_PI)).epsilon(1e-13));

  CHECK_THROWS_AS(lp_norm(cs, 0.5), std::invalid_argument);
}

TEST_CASE("ball_lp_norm: full cover, zero field, brute-force oracle, monotonicity") {
  TorusGrid g = make_grid(2, {16, 16});
  Field f = random_band_limited(g, 0, 1, 4, 21, 0.8);
  std::vector<double> center{g.coord(0, 5), g.coord(1, 9)};

  double diam = 0.5 * std::sqrt(2.0) * kTwoPi + 1.0;
  CHECK(ball_lp_norm(f, center, diam, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-14));

  Field z = make_scalar(g);
  CHECK(ball_lp_norm(z, center, 1.0, 3.0) == 0.0);

  // brute-force site-sum oracle, independent distance/quadrature code
  double radius = 1.2, p = 2.0;
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      double dx = std::fabs(g.coord(0, i) - center[0]);
      double dy = std::fabs(g.coord(1, j) - center[1]);
      dx = std::min(dx, kTwoPi - dx);
      dy = std::min(dy, kTwoPi - dy);
      if (std::sqrt(dx * dx + dy * dy) < radius)
        acc += std::pow(std::norm(f.data(i * 16 + j, 0)), p / 2);
    }
  }
  double expect = std::pow(acc * g.cell_volume(), 1.0 / p);
  CHECK(ball_lp_norm(f, center, radius, p) == doctest::Approx(expect).epsilon(1e-14));

  double prev = 0.0;
  for (double r : {0.7, 1.0, 1.6, 2.3, 3.0}) {
    double v = ball_lp_norm(f, center, r, 2.0);
    CHECK(v >= prev);
    prev = v;
  }

  std::vector<double> off_center{g.coord(0, 5) + 0.5 * g.spacing(0),
                                 g.coord(1, 9) + 0.5 * g.spacing(1)};
  CHECK_THROWS_AS(ball_lp_norm(f, off_center, 1e-6, 2.0), std::invalid_argument);
}

TEST_CASE("bump_function profile and integral bounds") {
  TorusGrid g = make_grid(2, {32, 32});
  std::vector<double> c{g.coord(0, 8), g.coord(1, 8)};
  ScalarField gamma = bump_function(g, c, 0.8, 2.0);

  for (std::int64_t row = 0; row < g.site_count(); ++row) {
    double v = gamma.data(row, 0).real();
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(gamma.data(row, 0).imag() == 0.0);
  }
  CHECK(gamma.data(8 * 32 + 8, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> antipode{c[0] + M_PI, c[1] + M_PI};
  double far = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      std::vector<double> x{g.coord(0, i), g.coord(1, j)};
      if (torus_distance(g, x, antipode) < 0.5)
        far = std::max(far, gamma.data(i * 32 + j, 0).real());
    }
  CHECK(far < 1e-3);

  // integral between the two ball volumes (quadrature bound, generous slack
  // for the band-limit ripple)
  double integral = 0.0;
  for (std::int64_t row = 0; row < g.site_count(); ++row)
    integral += gamma.data(row, 0).real();
  integral *= g.cell_volume();
  double vol_inner = M_PI * 0.8 * 0.8, vol_outer = M_PI * 2.0 * 2.0;
  CHECK(integral > 0.9 * vol_inner);
  CHECK(integral < 1.1 * vol_outer);

  CHECK_THROWS_AS(bump_function(g, c, 2.0, 0.8), std::invalid_argument);
}

TEST_CASE("weighted_l2_norm: unit and constant weights") {
  TorusGrid g = make_grid(2, {8, 8});
  Field f = random_band_limited(g, 0, 1, 2, 5, 0.9);

  BumpWeight ones{make_scalar(g), 2.0};
  ones.gamma.data.setConstant(Complex(1.0, 0.0));
  CHECK(weighted_l2_norm(f, ones) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));

  Field z = make_scalar(g);
  CHECK(weighted_l2_norm(z, ones) == 0.0);

  // gamma = 1/4, s = 2, f = const c: brute-force site sum oracle
  BumpWeight quarter{make_scalar(g), 2.0};
  quarter.gamma.data.setConstant(Complex(0.25, 0.0));
  Complex cval(0.3, -1.1);
  ScalarField cf = fill_scalar(g, [&](const std::vector<double>&) { return cval; });
  double acc = 0.0;
  for (std::int64_t row = 0; row < g.site_count(); ++row)
    acc += std::pow(0.25, 2.0) * std::norm(cval);
  double expect = std::sqrt(acc * g.cell_volume());
  CHECK(weighted_l2_norm(cf, quarter) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("random_band_limited: determinism, zero amplitude, spectral support") {
  TorusGrid g = make_grid(2, {16, 16});

  Field z = random_band_limited(g, 0, 1, 2, 7, 0.0);
  CHECK(sup_norm(z) == 0.0);

  Field f1 = random_band_limited(g, 1, 2, 4, 7, 1.0);
  Field f2 = random_band_limited(g, 1, 2, 4, 7, 1.0);
  CHECK((f1.data == f2.data).all());

  // kmax = 2: derivative commutes with a second band-limit projection
  Field f = random_band_limited(g, 0, 1, 2, 9, 1.0);
  Field df = spectral_partial(f, 1);
  CHECK(max_abs_diff(df, dealiased(df)) < 1e-13);

  CHECK_THROWS_AS(random_band_limited(g, 0, 1, 6, 7, 1.0), std::invalid_argument);

  Field a = random_band_limited(g, 1, 1, 3, 8, 1.0, true);
  CHECK(max_real_part(a) == 0.0);
  CHECK(max_abs_diff(a, dealiased(a)) < 1e-13 * (1.0 + sup_norm(a)));
}

TEST_CASE("snapshot round trip") {
  TorusGrid g = make_grid(2, {8, 8}, {1.0, 2.0});
  Field f = random_band_limited(g, 1, 2, 2, 17, 0.7);
  SnapshotMeta meta{0.25, 1, -1.0};
  std::string base = "/tmp/swflow_test_snapshot";
  write_snapshot(base, f, meta);
  LoadedSnapshot back = read_snapshot(base);
  CHECK(back.field.rank == f.rank);
  CHECK(back.field.spinor_rank == f.spinor_rank);
  CHECK(back.field.grid.same_layout(f.grid));
  CHECK((back.field.data == f.data).all());
  CHECK(back.meta.time == meta.time);
  CHECK(back.meta.k == meta.k);
  CHECK(back.meta.s0 == meta.s0);
}

TEST_CASE("shifted evaluates the interpolant exactly on band-limited data") {
  TorusGrid g = make_grid(1, {16});
  ScalarField s = fill_scalar(g, [](const std::vector<double>& x) {
    return std::sin(x[0]) + 0.5 * std::cos(2 * x[0]);
  });
  double off = 0.3;
  Field sh = shifted(s, {off});
  for (int i = 0; i < 16; ++i) {
    double x = g.coord(0, i) + off;
    Complex expect(std::sin(x) + 0.5 * std::cos(2 * x), 0.0);
    CHECK(std::abs(sh.data(i, 0) - expect) < 1e-13);
  }
}
