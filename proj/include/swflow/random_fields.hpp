#pragma once

#include <cstdint>

#include "swflow/field.hpp"

namespace swflow {

/// Deterministic band-limited random field: independent complex Gaussian-ish
/// coefficients on modes with |s_a| <= kmax on every axis, normalized so the
/// typical pointwise magnitude is about `amplitude`. Fixed seed gives
/// bitwise-identical output. When `purely_imaginary` is set the field is
/// projected onto iR pointwise (stays band-limited).
Field random_band_limited(const TorusGrid& grid, int rank, int spinor_rank, int kmax,
                          std::uint64_t seed, double amplitude,
                          bool purely_imaginary = false);

}  // namespace swflow
