#pragma once

#include <cstddef>
#include <vector>

namespace symts {

/// Half-width w of the symmetric window used for polynomial degree `accuracy`:
/// w = ceil(accuracy / 2), so the window holds 2w+1 samples.
std::size_t stencil_half_width(int accuracy);

/// Weights of the `order`-th derivative at sample `at` of a window of
/// `window` consecutive samples spaced `h` apart.
///
/// The weights come from a least-squares fit of a degree-`accuracy`
/// polynomial to the window (an interpolant when window == accuracy + 1),
/// differentiated at the evaluation point. They are computed in exact
/// rational arithmetic and rounded once to double, so every stencil is
/// exact on polynomials of degree <= accuracy up to that final rounding.
/// Order 0 is the unit vector at `at`.
///
/// Requires 0 <= order <= accuracy < window and at < window.
std::vector<double> stencil_weights(int order, int accuracy, std::size_t window, std::size_t at, double h);

}  // namespace symts
