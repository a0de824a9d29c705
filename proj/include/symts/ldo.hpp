#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "symts/grid.hpp"

namespace symts {

/// Coefficient a_i(t): either a constant or one value per grid point.
using Coefficient = std::variant<double, std::vector<double>>;

/// Left-hand side of a_d(t) y^(d) + ... + a_0(t) y = g(t).
struct LdoSpec {
    int degree = 0;
    std::vector<Coefficient> coefficients;  // index i multiplies the i-th derivative

    /// Constant-coefficient operator; coefficients[i] multiplies y^(i).
    static LdoSpec constant(std::vector<double> coefficients);
    /// The pure derivative D^(order).
    static LdoSpec derivative(int order);

    /// Throws InvalidSpec, CoefficientLengthMismatch or LeadingCoefficientZero.
    void validate(std::size_t n) const;
    /// a_i at grid sample k.
    double coefficient(int i, std::size_t k) const;
    /// Same operator restricted to samples [first, first + count) of an n-sample grid;
    /// samples past the end repeat the last coefficient value.
    LdoSpec window(std::size_t first, std::size_t count) const;
};

/// Assembled operator L = sum_i diag(a_i) D^(i) together with its SVD.
class LdoMatrix {
public:
    const LdoSpec& spec() const noexcept { return spec_; }
    const Grid& grid() const noexcept { return grid_; }
    int accuracy() const noexcept { return accuracy_; }
    std::size_t size() const noexcept { return grid_.size(); }

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t null_dimension() const noexcept { return size() - rank_; }
    /// Orthonormal basis of the numerical null space (n x k).
    Eigen::MatrixXd null_basis() const;
    const Eigen::VectorXd& singular_values() const noexcept { return singular_values_; }
    /// Absolute threshold below which singular values count as zero.
    double rank_tolerance() const noexcept { return rank_tolerance_; }
    double norm() const noexcept { return singular_values_.size() ? singular_values_(0) : 0.0; }

    Eigen::MatrixXd pseudo_inverse() const;
    /// L^+ g without forming L^+.
    Eigen::VectorXd pseudo_inverse_apply(std::span<const double> g) const;

    /// First column and width of the nonzero window of each row.
    std::size_t row_begin(std::size_t row) const noexcept { return row_begin_[row]; }
    std::size_t row_width() const noexcept { return row_width_; }

private:
    friend LdoMatrix assemble_ldo(const LdoSpec&, const Grid&, int, double);

    LdoMatrix(LdoSpec spec, const Grid& grid, int accuracy)
        : spec_(std::move(spec)), grid_(grid), accuracy_(accuracy) {}

    LdoSpec spec_;
    Grid grid_;
    int accuracy_;
    Eigen::MatrixXd entries_;
    std::vector<std::size_t> row_begin_;
    std::size_t row_width_ = 0;
    Eigen::MatrixXd u_;
    Eigen::VectorXd singular_values_;
    Eigen::MatrixXd v_;
    std::size_t rank_ = 0;
    double rank_tolerance_ = 0.0;
};

/// Default relative rank threshold; the absolute one is
/// max(n * eps * sigma_max, relative * sigma_max). Below about 3e-9 the retained
/// near-zero singular values let rounding dominate L^T (L L^+ g - g).
inline constexpr double kDefaultRankTolerance = 1e-8;

/// Throws CoefficientLengthMismatch, LeadingCoefficientZero, InvalidSpec,
/// OrderExceedsAccuracy (accuracy < degree) or GridTooShort.
LdoMatrix assemble_ldo(const LdoSpec& spec, const Grid& grid, int accuracy,
                       double relative_rank_tolerance = kDefaultRankTolerance);

/// Forward model L x; each row sums its window left to right. Throws LengthMismatch.
Eigen::VectorXd apply_ldo(const LdoMatrix& op, std::span<const double> x);

/// Point value y[index] = value fixing the null-space coefficients.
struct Constraint {
    std::size_t index = 0;
    double value = 0.0;
};

struct InverseSolution {
    Eigen::VectorXd y_particular;  // L^+ g
    Eigen::VectorXd alpha;         // null-space coefficients
    Eigen::VectorXd y;             // y_particular + N alpha
    Eigen::VectorXd residual;      // L y - g
    std::vector<Constraint> constraints;
};

/// y = L^+ g + N alpha with alpha chosen so that every constraint holds exactly.
///
/// Throws LengthMismatch, ConstraintCountMismatch (count != null dimension),
/// InvalidConstraint (index out of range or repeated) and
/// SingularConstraintSystem (constraint rows of N are rank deficient).
InverseSolution solve_inverse(const LdoMatrix& op, std::span<const double> g, std::span<const Constraint> constraints);

/// Linear part P of the constrained solution y = P g + c, i.e.
/// P = (I - N B^-1 E) L^+ with E selecting the constraint rows and B = E N.
Eigen::MatrixXd solution_map(const LdoMatrix& op, std::span<const std::size_t> constraint_indices);

inline std::span<const double> as_span(const Eigen::VectorXd& v) noexcept {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace symts
