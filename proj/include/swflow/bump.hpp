#pragma once

#include "swflow/norms.hpp"

namespace swflow {

/// Smooth cutoff: 1 inside the plateau radius, 0 outside the support radius,
/// raised-cosine in between, then band-limited (2/3-rule projection) and
/// clamped back into [0, 1] so 0 <= gamma <= 1 holds exactly at every site.
/// Requires 0 < r_plateau < r_support < min period / 2.
ScalarField bump_function(const TorusGrid& grid, const std::vector<double>& center,
                          double r_plateau, double r_support);

}  // namespace swflow
