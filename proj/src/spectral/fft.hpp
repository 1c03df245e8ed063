#pragma once

#include <span>

#include "sobolab/spectral.hpp"

namespace sobolab::spectral::detail {

/// Continuous-convention transform of grid samples: out_k = h^n sum_j e^{-2 pi i x_j xi_k} in_j.
void forward_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out);
/// Inverse of forward_transform: out_j = (1/prod L) sum_k e^{2 pi i x_j xi_k} in_k.
void inverse_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out);

}  // namespace sobolab::spectral::detail
