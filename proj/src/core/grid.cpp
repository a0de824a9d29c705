#include "symts/grid.hpp"

#include <cmath>
#include <string>

#include "symts/error.hpp"

namespace symts {

Grid::Grid(std::size_t n, double h, double t0) : n_(n), h_(h), t0_(t0) {
    if (n < 2) {
        fail(ErrorCode::InvalidGrid, "grid needs at least 2 samples, got " + std::to_string(n));
    }
    if (!std::isfinite(h) || h <= 0.0) {
        fail(ErrorCode::InvalidGrid, "grid step must be finite and positive");
    }
    if (!std::isfinite(t0)) {
        fail(ErrorCode::InvalidGrid, "grid start must be finite");
    }
}

Grid Grid::slice(std::size_t first, std::size_t count) const {
    return Grid(count, h_, time(first));
}

}  // namespace symts
