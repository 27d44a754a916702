#include "swflow/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace swflow {

Complex l2_inner(const Field& f, const Field& g) {
  require_compatible(f, g, "l2_inner");
  Complex s = (f.data * g.data.conjugate()).sum();
  return s * form_weight(f) * f.grid.cell_volume();
}

Eigen::ArrayXd pointwise_norm2(const Field& f) {
  return f.data.abs2().rowwise().sum() * form_weight(f);
}

double lp_norm(const Field& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  Eigen::ArrayXd pn2 = pointwise_norm2(f);
  double acc = (pn2.pow(0.5 * p)).sum() * f.grid.cell_volume();
  return std::pow(acc, 1.0 / p);
}

double sup_norm(const Field& f) {
  if (f.data.rows() == 0) return 0.0;
  return std::sqrt(pointwise_norm2(f).maxCoeff());
}

double l2_norm2(const Field& f) { return l2_inner(f, f).real(); }

double l2_norm(const Field& f) { return std::sqrt(std::max(0.0, l2_norm2(f))); }

double ball_lp_norm(const Field& f, const std::vector<double>& center, double radius,
                    double p) {
  if (p < 1.0) throw std::invalid_argument("ball_lp_norm: p must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("ball_lp_norm: radius must be positive");
  const TorusGrid& g = f.grid;
  if (static_cast<int>(center.size()) != g.n)
    throw std::invalid_argument("ball_lp_norm: center must have one entry per axis");
  Eigen::ArrayXd pn2 = pointwise_norm2(f);
  std::vector<double> x(g.n);
  std::vector<int> idx(g.n, 0);
  double acc = 0.0;
  std::int64_t hit = 0;
  const std::int64_t sites = g.site_count();
  for (std::int64_t row = 0; row < sites; ++row) {
    for (int a = 0; a < g.n; ++a) x[a] = g.coord(a, idx[a]);
    if (torus_distance(g, x, center) < radius) {
      acc += std::pow(pn2[row], 0.5 * p);
      ++hit;
    }
    for (int a = g.n - 1; a >= 0; --a) {
      if (++idx[a] < g.sizes[a]) break;
      idx[a] = 0;
    }
  }
  if (hit == 0) throw std::invalid_argument("ball_lp_norm: ball contains no lattice sites");
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double weighted_l2_norm(const Field& f, const BumpWeight& w) {
  if (!w.gamma.grid.same_layout(f.grid))
    throw std::invalid_argument("weighted_l2_norm: weight lives on a different grid");
  Eigen::ArrayXd pn2 = pointwise_norm2(f);
  Eigen::ArrayXd gs = w.gamma.data.col(0).real().pow(w.s);
  double acc = (gs * pn2).sum() * f.grid.cell_volume();
  return std::sqrt(std::max(0.0, acc));
}

}  // namespace swflow
