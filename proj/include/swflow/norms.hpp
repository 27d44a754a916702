#pragma once

#include "swflow/field.hpp"

namespace swflow {

struct BumpWeight {
  ScalarField gamma;  // values in [0, 1]
  double s = 0.0;     // positive exponent, weight is gamma^{s/2}
};

/// Cell-volume weighted Hermitian inner product, linear in the first slot and
/// conjugate-linear in the second. Form blocks carry the 1/form_degree!
/// weight.
Complex l2_inner(const Field& f, const Field& g);

/// Pointwise squared norm |f(x)|^2 (spinor and tensor lanes contracted, form
/// weight applied). One value per site.
Eigen::ArrayXd pointwise_norm2(const Field& f);

/// (integral |f|^p dmu)^{1/p} with cell quadrature; p >= 1.
double lp_norm(const Field& f, double p);

/// Max over sites of the pointwise norm.
double sup_norm(const Field& f);

/// ||f||_{L2}^2 = Re l2_inner(f, f).
double l2_norm2(const Field& f);
double l2_norm(const Field& f);

/// L^p quadrature restricted to sites within torus distance < radius of
/// `center`. Throws when the ball contains no sites.
double ball_lp_norm(const Field& f, const std::vector<double>& center, double radius,
                    double p);

/// || gamma^{s/2} f ||_{L2} via pointwise weighting.
double weighted_l2_norm(const Field& f, const BumpWeight& w);

}  // namespace swflow
