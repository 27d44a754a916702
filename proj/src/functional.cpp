#include "swflow/functional.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swflow/random_fields.hpp"

namespace swflow {

namespace {

// Adjoint of partials_prepend (the flat Levi-Civita derivative).
Field partials_adjoint(const Field& f) {
  Field out = div_first(f);
  out.data = -out.data;
  return out;
}

struct EnergyChains {
  std::vector<Field> d_phi;  // d_phi[j] = D_A^{(j)} phi, j = 0..k+1
  Field w;                   // nabla^{(k)} F_A
  Eigen::ArrayXd phi_norm2;  // |phi|^2 pointwise
};

EnergyChains build_chains(const ConnectionForm& a, const SpinorField& phi, int k,
                          bool dealias) {
  EnergyChains c;
  c.d_phi.reserve(k + 2);
  c.d_phi.push_back(phi);
  for (int j = 1; j <= k + 1; ++j) c.d_phi.push_back(cov_deriv(a, c.d_phi.back(), dealias));
  c.w = curvature(a);
  for (int j = 0; j < k; ++j) c.w = partials_prepend(c.w);
  c.phi_norm2 = pointwise_norm2(phi);
  return c;
}

EnergyBreakdown breakdown_from_chains(const EnergyChains& c, const SpinorField& phi,
                                      double curvature_coeff, double s0) {
  EnergyBreakdown e;
  e.curvature_term = curvature_coeff * l2_norm2(c.w);
  e.dirichlet_term = l2_norm2(c.d_phi.back());
  e.scalar_term = 0.25 * s0 * l2_norm2(phi);
  e.quartic_term = 0.125 * (c.phi_norm2 * c.phi_norm2).sum() * phi.grid.cell_volume();
  e.total = e.curvature_term + e.dirichlet_term + e.scalar_term + e.quartic_term;
  return e;
}

GradientPair grad_pair_with_potential(const ConnectionForm& a, const SpinorField& phi,
                                      int k, double c_scalar, double c_quartic,
                                      bool dealias) {
  EnergyChains c = build_chains(a, phi, k, dealias);

  // Spinor gradient: D^{*(k+1)} D^{(k+1)} phi + (c_s + c_q |phi|^2) phi.
  SpinorField g_phi = iterated_cov_adjoint(a, c.d_phi.back(), k + 1, dealias);
  Eigen::ArrayXcd pot = (c_scalar + c_quartic * c.phi_norm2).cast<Complex>();
  for (int s = 0; s < phi.spinor_rank; ++s) g_phi.data.col(s) += pot * phi.data.col(s);
  if (dealias) dealias_inplace(g_phi);

  // Connection gradient, curvature part: 1/2 d* nabla^{*(k)} nabla^{(k)} F.
  Field wstar = c.w;
  for (int j = 0; j < k; ++j) wstar = partials_adjoint(wstar);
  Field g_curv = codifferential(wstar);

  // Moment-map part: exact derivative of the Dirichlet term in A. Inserting
  // the direction at slot j of D^{(k+1)} and pulling it back through the j
  // leading adjoints gives sum_j <D^{*(j)} D^{(k+1)} phi, D^{(k-j)} phi>.
  Field vsum = make_field(phi.grid, 1, 1, 1);
  Field ucur = c.d_phi.back();
  for (int j = 0; j <= k; ++j) {
    const Field& up = dealias ? dealiased(ucur) : ucur;
    vsum = vsum + contract_trailing(up, c.d_phi[k - j]);
    if (j < k) ucur = cov_deriv_adjoint(a, ucur, dealias);
  }

  ConnectionForm g_a = make_connection(phi.grid);
  g_a.data = (0.5 * g_curv.data.imag() + vsum.data.imag()).cast<Complex>() * Complex(0, 1);
  if (dealias) {
    dealias_inplace(g_a);
    project_imaginary_inplace(g_a);
  }
  g_a.purely_imaginary = true;
  return {std::move(g_phi), std::move(g_a)};
}

}  // namespace

EnergyBreakdown sw_energy(const ConnectionForm& a, const SpinorField& phi, double s0,
                          bool dealias) {
  EnergyChains c = build_chains(a, phi, 0, dealias);
  return breakdown_from_chains(c, phi, 1.0, s0);
}

EnergyBreakdown sw_energy_k(const ConnectionForm& a, const SpinorField& phi, int k,
                            double s0, bool dealias) {
  if (k < 0) throw std::invalid_argument("sw_energy_k: k must be >= 0");
  EnergyChains c = build_chains(a, phi, k, dealias);
  return breakdown_from_chains(c, phi, 0.5, s0);
}

GradientPair grad_pair(const ConnectionForm& a, const SpinorField& phi, int k, double s0,
                       bool dealias) {
  if (k < 0) throw std::invalid_argument("grad_pair: k must be >= 0");
  return grad_pair_with_potential(a, phi, k, 0.25 * s0, 0.25, dealias);
}

SpinorField grad_spinor(const ConnectionForm& a, const SpinorField& phi, int k, double s0,
                        bool dealias) {
  return grad_pair(a, phi, k, s0, dealias).g_phi;
}

ConnectionForm grad_connection(const ConnectionForm& a, const SpinorField& phi, int k,
                               bool dealias) {
  return grad_pair(a, phi, k, 0.0, dealias).g_a;
}

SpinorField grad_spinor_with_potential(const ConnectionForm& a, const SpinorField& phi,
                                       int k, double c_scalar, double c_quartic,
                                       bool dealias) {
  return grad_pair_with_potential(a, phi, k, c_scalar, c_quartic, dealias).g_phi;
}

FdCheckResult fd_gradient_check(const ConnectionForm& a, const SpinorField& phi, int k,
                                double s0, double h, int num_directions,
                                std::uint64_t seed, bool dealias,
                                bool negate_connection_gradient) {
  if (h < 1e-6 || h > 1e-3)
    throw std::invalid_argument("fd_gradient_check: h must lie in [1e-6, 1e-3]");
  if (num_directions < 1)
    throw std::invalid_argument("fd_gradient_check: need at least one direction");

  const TorusGrid& g = phi.grid;
  int kmax = dealias_kmax(g, 0);
  for (int ax = 1; ax < g.n; ++ax) kmax = std::min(kmax, dealias_kmax(g, ax));

  GradientPair gp = grad_pair(a, phi, k, s0, dealias);
  if (negate_connection_gradient) gp.g_a.data = -gp.g_a.data;

  auto rel_err = [](double num, double an) {
    double scale = std::max(std::fabs(num), std::fabs(an));
    if (scale == 0.0) return 0.0;
    return std::fabs(num - an) / scale;
  };

  FdCheckResult res;
  for (int d = 0; d < num_directions; ++d) {
    SpinorField eta = random_band_limited(g, 0, phi.spinor_rank, kmax,
                                          seed * 1000 + 2 * d, 1.0, false);
    double en = l2_norm(eta);
    if (en > 0) eta.data /= en;
    SpinorField pp = phi, pm = phi;
    pp.data += h * eta.data;
    pm.data -= h * eta.data;
    double dnum = (sw_energy_k(a, pp, k, s0, dealias).total -
                   sw_energy_k(a, pm, k, s0, dealias).total) /
                  (2.0 * h);
    double dan = 2.0 * l2_inner(gp.g_phi, eta).real();
    res.rel_err_phi = std::max(res.rel_err_phi, rel_err(dnum, dan));

    ConnectionForm b = random_band_limited(g, 1, 1, kmax, seed * 1000 + 2 * d + 1, 1.0, true);
    double bn = l2_norm(b);
    if (bn > 0) b.data /= bn;
    ConnectionForm ap = a, am = a;
    ap.data += h * b.data;
    am.data -= h * b.data;
    double dnum_a = (sw_energy_k(ap, phi, k, s0, dealias).total -
                     sw_energy_k(am, phi, k, s0, dealias).total) /
                    (2.0 * h);
    double dan_a = 2.0 * l2_inner(gp.g_a, b).real();
    res.rel_err_a = std::max(res.rel_err_a, rel_err(dnum_a, dan_a));
  }
  return res;
}

}  // namespace swflow
