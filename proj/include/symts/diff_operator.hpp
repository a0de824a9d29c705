#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "symts/grid.hpp"

namespace symts {

/// Discrete realization of the `order`-th derivative on a uniform grid.
///
/// Interior rows carry the central stencil of width 2w+1, w = ceil(accuracy/2);
/// the first and last w rows use the same window shifted against the grid
/// edge (one-sided stencils of the same polynomial degree). Rows are stored
/// as stencils; dense() materializes the n x n matrix.
class DiffOperatorMatrix {
public:
    /// Throws OrderExceedsAccuracy unless 0 <= order <= accuracy, and
    /// GridTooShort when grid.size() <= accuracy.
    static DiffOperatorMatrix build(const Grid& grid, int order, int accuracy);

    int order() const noexcept { return order_; }
    int accuracy() const noexcept { return accuracy_; }
    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    /// Stencil half-width w.
    std::size_t support() const noexcept { return half_width_; }
    /// Samples per row window (2w+1, or n on grids shorter than that).
    std::size_t window() const noexcept { return window_; }

    /// First column of the window used by row `row`.
    std::size_t row_begin(std::size_t row) const noexcept;
    /// Weights over columns [row_begin(row), row_begin(row) + window()).
    std::span<const double> row_weights(std::size_t row) const noexcept;

    Eigen::MatrixXd dense() const;

    /// Row-by-row product; each row sums its window left to right.
    std::vector<double> apply(std::span<const double> x) const;

private:
    DiffOperatorMatrix(const Grid& grid, int order, int accuracy);

    Grid grid_;
    int order_;
    int accuracy_;
    std::size_t half_width_;
    std::size_t window_;
    std::vector<std::vector<double>> stencils_;  // indexed by evaluation position inside the window
};

/// Free-function spelling of DiffOperatorMatrix::build.
DiffOperatorMatrix build_diff_operator(const Grid& grid, int order, int accuracy);

}  // namespace symts
