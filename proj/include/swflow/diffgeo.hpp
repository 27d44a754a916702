#pragma once

#include <utility>

#include "swflow/norms.hpp"
#include "swflow/transforms.hpp"

namespace swflow {

/// U(1) gauge element zeta = e^{i theta}, stored as the real angle field.
struct GaugePhase {
  ScalarField theta;
};

GaugePhase zero_gauge(const TorusGrid& grid);

/// Exterior derivative of a j-form (form_degree == rank < n):
/// (d w)_{i_0..i_j} = sum_m (-1)^m d_{i_m} w_{i_0..^i_m..i_j}. Satisfies
/// d(d w) = 0 to roundoff.
Field exterior_d(const Field& w);

/// Codifferential, the exact discrete L2 adjoint of exterior_d under the
/// weighted form inner product: (d* w)_{i_1..i_{j-1}} = -sum_a d_a w_{a,i_1..}.
Field codifferential(const Field& w);

/// F_A = dA for a purely imaginary connection 1-form.
TwoForm curvature(const ConnectionForm& a);

/// Gauge-covariant derivative on tensor spinors, new index prepended:
/// (D_A T)_{a,rest} = d_a T_rest + A_a T_rest. With `dealias` the pointwise
/// product is 2/3-rule truncated.
Field cov_deriv(const ConnectionForm& a, const Field& t, bool dealias);

/// Exact discrete adjoint of cov_deriv (first index contracted):
/// (D_A^* U)_rest = -sum_a (d_a U_{a,rest} + A_a P(U_{a,rest})), where P is
/// the truncation used by the forward operator. Adjointness is exact by
/// construction, not an independent discretization.
Field cov_deriv_adjoint(const ConnectionForm& a, const Field& u, bool dealias);

/// m-fold compositions; m = 0 is the identity.
Field iterated_cov_deriv(const ConnectionForm& a, const Field& t, int m, bool dealias);
Field iterated_cov_adjoint(const ConnectionForm& a, const Field& u, int m, bool dealias);

/// Hodge Laplacian dd* + d*d on forms.
Field hodge_laplacian(const Field& w);

/// Bochner Laplacian nabla* nabla, componentwise spectral |xi|^2 multiplier.
/// Agrees with hodge_laplacian on the flat torus.
Field bochner_laplacian(const Field& w);

/// Gauge action: A' = A + i d(theta), phi' = e^{-i theta} phi. Curvature is
/// unchanged.
std::pair<ConnectionForm, SpinorField> gauge_transform(const GaugePhase& g,
                                                       const ConnectionForm& a,
                                                       const SpinorField& phi);

struct CoulombResult {
  ConnectionForm a_coul;
  GaugePhase gauge;
};

/// Solves Delta theta = -d*(Im A) spectrally (zero-mean theta, harmonic part
/// of A untouched) so that d*(A + i d theta) = 0.
CoulombResult coulomb_project(const ConnectionForm& a);

/// D_i D_j phi - D_j D_i phi - F_ij phi; vanishes to dealiased spectral
/// accuracy. Requires i != j.
SpinorField commutator_defect(const ConnectionForm& a, const SpinorField& phi, int i,
                              int j, bool dealias);

/// Pointwise contraction of all trailing indices and the spinor slot of `u`
/// (rank m+1) against `t` (rank m, conjugated): out_a = <u_{a,..}, t_{..}>.
/// This is the moment-map pairing used by the connection gradient.
Field contract_trailing(const Field& u, const Field& t);

}  // namespace swflow
