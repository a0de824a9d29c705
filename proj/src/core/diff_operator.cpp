#include "symts/diff_operator.hpp"

#include <algorithm>
#include <string>

#include "symts/error.hpp"
#include "symts/stencil.hpp"

namespace symts {

DiffOperatorMatrix::DiffOperatorMatrix(const Grid& grid, int order, int accuracy)
    : grid_(grid), order_(order), accuracy_(accuracy), half_width_(stencil_half_width(accuracy)) {
    window_ = std::min(2 * half_width_ + 1, grid_.size());
    stencils_.reserve(window_);
    for (std::size_t at = 0; at < window_; ++at) {
        stencils_.push_back(stencil_weights(order_, accuracy_, window_, at, grid_.step()));
    }
}

DiffOperatorMatrix DiffOperatorMatrix::build(const Grid& grid, int order, int accuracy) {
    if (order < 0 || order > accuracy) {
        fail(ErrorCode::OrderExceedsAccuracy,
             "derivative order " + std::to_string(order) + " exceeds accuracy " + std::to_string(accuracy));
    }
    if (grid.size() <= static_cast<std::size_t>(accuracy)) {
        fail(ErrorCode::GridTooShort, "grid of " + std::to_string(grid.size()) +
                                          " samples is too short for accuracy " + std::to_string(accuracy));
    }
    return DiffOperatorMatrix(grid, order, accuracy);
}

std::size_t DiffOperatorMatrix::row_begin(std::size_t row) const noexcept {
    const std::size_t last_start = grid_.size() - window_;
    if (row < half_width_) {
        return 0;
    }
    return std::min(row - half_width_, last_start);
}

std::span<const double> DiffOperatorMatrix::row_weights(std::size_t row) const noexcept {
    return stencils_[row - row_begin(row)];
}

Eigen::MatrixXd DiffOperatorMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t row = 0; row < size(); ++row) {
        const std::size_t begin = row_begin(row);
        const auto weights = row_weights(row);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(begin + k)) = weights[k];
        }
    }
    return m;
}

std::vector<double> DiffOperatorMatrix::apply(std::span<const double> x) const {
    if (x.size() != size()) {
        fail(ErrorCode::LengthMismatch,
             "input has " + std::to_string(x.size()) + " samples, operator expects " + std::to_string(size()));
    }
    std::vector<double> out(size());
    for (std::size_t row = 0; row < size(); ++row) {
        const std::size_t begin = row_begin(row);
        const auto weights = row_weights(row);
        double acc = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            acc += weights[k] * x[begin + k];
        }
        out[row] = acc;
    }
    return out;
}

DiffOperatorMatrix build_diff_operator(const Grid& grid, int order, int accuracy) {
    return DiffOperatorMatrix::build(grid, order, accuracy);
}

}  // namespace symts
