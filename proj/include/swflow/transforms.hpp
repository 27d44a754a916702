#pragma once

#include "swflow/field.hpp"

namespace swflow {

/// Largest spectral index K kept by the 2/3-rule band on an axis:
/// K = floor((N-1)/3), so products of two in-band fields alias only onto
/// discarded modes.
int dealias_kmax(const TorusGrid& grid, int axis);

/// Signed lattice frequency 2*pi*s/L for FFT bin `index` (s in (-N/2, N/2]).
double mode_freq(const TorusGrid& grid, int axis, int index);

/// Frequency used by spectral derivatives: as mode_freq but the Nyquist bin
/// maps to zero, which keeps d/dx_j exactly skew-adjoint on the lattice.
double deriv_freq(const TorusGrid& grid, int axis, int index);

/// Forward transform to Fourier coefficients of the trigonometric interpolant
/// (f(x) = sum_k fhat(k) e^{i xi_k . x}); inverse undoes it exactly.
void to_spectral_inplace(Field& f);
void to_physical_inplace(Field& f);
Field to_spectral(Field f);
Field to_physical(Field f);

/// Exact spectral derivative along one axis (Nyquist bin of the derivative
/// zeroed). Linear, annihilates constants.
Field spectral_partial(const Field& f, int axis);

/// All axis partials at once, prepended as a new first tensor index:
/// out_{a, multi} = d_a f_{multi}. This realizes the flat Levi-Civita
/// covariant derivative on tensors.
Field partials_prepend(const Field& f);

/// Contraction of the derivative against the first index:
/// out_{rest} = sum_a d_a f_{a, rest}. Negated by callers that need the
/// L2 adjoint of partials_prepend.
Field div_first(const Field& f);

/// 2/3-rule spectral truncation: zeroes every mode with |s_a| > K_a on any
/// axis (Nyquist included). Orthogonal projection, hence self-adjoint.
void dealias_inplace(Field& f);
Field dealiased(Field f);

/// Applies a fixed per-mode multiplier m(xi) = (sum_a deriv_freq_a^2)^power
/// to every lane; power = 1 is the (positive) Bochner Laplacian on the flat
/// torus.
Field laplacian_pow(const Field& f, int power);

/// Evaluates the trigonometric interpolant at sites shifted by `offset`
/// (exact Fourier phase shift).
Field shifted(const Field& f, const std::vector<double>& offset);

}  // namespace swflow
