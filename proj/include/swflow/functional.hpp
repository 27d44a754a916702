#pragma once

#include <cstdint>

#include "swflow/diffgeo.hpp"

namespace swflow {

struct EnergyBreakdown {
  double curvature_term = 0.0;  // 1/2 ||nabla^{(k)} F_A||^2   (coefficient 1 for sw_energy)
  double dirichlet_term = 0.0;  // ||D_A^{(k+1)} phi||^2
  double scalar_term = 0.0;     // (S0/4) ||phi||^2
  double quartic_term = 0.0;    // (1/8) ||phi||_{L4}^4
  double total = 0.0;
};

struct GradientPair {
  SpinorField g_phi;
  ConnectionForm g_a;  // purely imaginary by construction
};

/// Classical energy: coefficient 1 on |F_A|^2 and |D_A phi|^2.
EnergyBreakdown sw_energy(const ConnectionForm& a, const SpinorField& phi, double s0,
                          bool dealias);

/// Order-k energy: 1/2 |nabla^{(k)} F_A|^2 + |D_A^{(k+1)} phi|^2
/// + (S0/4)|phi|^2 + (1/8)|phi|^4.
EnergyBreakdown sw_energy_k(const ConnectionForm& a, const SpinorField& phi, int k,
                            double s0, bool dealias);

/// Exact discrete gradients of sw_energy_k under the pairing
/// dE(direction) = 2 Re <grad, direction>, so that the flow rates (-grads)
/// dissipate energy at exactly 2(||phi_dot||^2 + ||a_dot||^2):
///   g_phi = D_A^{*(k+1)} D_A^{(k+1)} phi + 1/4 (S0 + |phi|^2) phi
///   g_a   = 1/2 d* nabla^{*(k)} nabla^{(k)} F_A
///           + i Im sum_{j=0}^{k} <D^{*(j)} D^{(k+1)} phi, D^{(k-j)} phi>.
SpinorField grad_spinor(const ConnectionForm& a, const SpinorField& phi, int k, double s0,
                        bool dealias);
ConnectionForm grad_connection(const ConnectionForm& a, const SpinorField& phi, int k,
                               bool dealias);

/// Both gradients sharing the covariant-derivative chain.
GradientPair grad_pair(const ConnectionForm& a, const SpinorField& phi, int k, double s0,
                       bool dealias);

/// Spinor gradient with explicit potential coefficients
/// (c_scalar + c_quartic |phi|^2) phi; the standard flow uses
/// c_scalar = S0/4, c_quartic = 1/4. The lambda-scaled system uses
/// c_scalar = lambda^{2k+2} S0 / 4, c_quartic = lambda^{2k} / 4.
SpinorField grad_spinor_with_potential(const ConnectionForm& a, const SpinorField& phi,
                                       int k, double c_scalar, double c_quartic,
                                       bool dealias);

struct FdCheckResult {
  double rel_err_phi = 0.0;
  double rel_err_a = 0.0;
};

/// Central finite differences of the discrete energy along random
/// band-limited unit directions (purely imaginary for A) against
/// 2 Re <grad, direction>; returns the worst relative errors. h must lie in
/// [1e-6, 1e-3]. `negate_connection_gradient` is a negative-control hook.
FdCheckResult fd_gradient_check(const ConnectionForm& a, const SpinorField& phi, int k,
                                double s0, double h, int num_directions,
                                std::uint64_t seed, bool dealias,
                                bool negate_connection_gradient = false);

}  // namespace swflow
