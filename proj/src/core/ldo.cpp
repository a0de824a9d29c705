#include "symts/ldo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "symts/diff_operator.hpp"
#include "symts/error.hpp"

namespace symts {

LdoSpec LdoSpec::constant(std::vector<double> coefficients) {
    LdoSpec spec;
    spec.degree = static_cast<int>(coefficients.size()) - 1;
    spec.coefficients.assign(coefficients.begin(), coefficients.end());
    return spec;
}

LdoSpec LdoSpec::derivative(int order) {
    std::vector<double> coefficients(static_cast<std::size_t>(order) + 1, 0.0);
    coefficients.back() = 1.0;
    return constant(std::move(coefficients));
}

void LdoSpec::validate(std::size_t n) const {
    if (degree < 0) {
        fail(ErrorCode::InvalidSpec, "operator degree must be non-negative");
    }
    if (coefficients.size() != static_cast<std::size_t>(degree) + 1) {
        fail(ErrorCode::InvalidSpec, "degree " + std::to_string(degree) + " needs " + std::to_string(degree + 1) +
                                         " coefficients, got " + std::to_string(coefficients.size()));
    }
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (const auto* values = std::get_if<std::vector<double>>(&coefficients[i])) {
            if (values->size() != n) {
                fail(ErrorCode::CoefficientLengthMismatch, "coefficient a_" + std::to_string(i) + " has " +
                                                               std::to_string(values->size()) + " values, grid has " +
                                                               std::to_string(n));
            }
            if (!std::all_of(values->begin(), values->end(), [](double v) { return std::isfinite(v); })) {
                fail(ErrorCode::InvalidSpec, "coefficient a_" + std::to_string(i) + " has non-finite values");
            }
        } else if (!std::isfinite(std::get<double>(coefficients[i]))) {
            fail(ErrorCode::InvalidSpec, "coefficient a_" + std::to_string(i) + " is not finite");
        }
    }
    const auto& lead = coefficients.back();
    const bool zero = std::visit(
        [](const auto& c) {
            if constexpr (std::is_same_v<std::decay_t<decltype(c)>, double>) {
                return c == 0.0;
            } else {
                return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
            }
        },
        lead);
    if (zero) {
        fail(ErrorCode::LeadingCoefficientZero, "leading coefficient a_" + std::to_string(degree) + " is identically zero");
    }
}

double LdoSpec::coefficient(int i, std::size_t k) const {
    const auto& c = coefficients[static_cast<std::size_t>(i)];
    if (const auto* values = std::get_if<std::vector<double>>(&c)) {
        return (*values)[k];
    }
    return std::get<double>(c);
}

LdoSpec LdoSpec::window(std::size_t first, std::size_t count) const {
    LdoSpec out;
    out.degree = degree;
    for (const auto& c : coefficients) {
        if (const auto* values = std::get_if<std::vector<double>>(&c)) {
            std::vector<double> slice(count);
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t src = std::min(first + k, values->size() - 1);
                slice[k] = (*values)[src];
            }
            out.coefficients.emplace_back(std::move(slice));
        } else {
            out.coefficients.push_back(c);
        }
    }
    return out;
}

LdoMatrix assemble_ldo(const LdoSpec& spec, const Grid& grid, int accuracy, double relative_rank_tolerance) {
    spec.validate(grid.size());
    if (accuracy < spec.degree) {
        fail(ErrorCode::OrderExceedsAccuracy, "accuracy " + std::to_string(accuracy) +
                                                  " is below the operator degree " + std::to_string(spec.degree));
    }
    if (!(relative_rank_tolerance >= 0.0)) {
        fail(ErrorCode::InvalidSpec, "rank tolerance must be non-negative");
    }

    std::vector<DiffOperatorMatrix> derivatives;
    derivatives.reserve(static_cast<std::size_t>(spec.degree) + 1);
    for (int i = 0; i <= spec.degree; ++i) {
        derivatives.push_back(DiffOperatorMatrix::build(grid, i, accuracy));
    }

    LdoMatrix op(spec, grid, accuracy);
    const std::size_t n = grid.size();
    const auto& geometry = derivatives.back();
    op.row_width_ = geometry.window();
    op.row_begin_.resize(n);
    op.entries_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t row = 0; row < n; ++row) {
        const std::size_t begin = geometry.row_begin(row);
        op.row_begin_[row] = begin;
        for (std::size_t k = 0; k < op.row_width_; ++k) {
            double acc = 0.0;
            for (int i = 0; i <= spec.degree; ++i) {
                acc += spec.coefficient(i, row) * derivatives[static_cast<std::size_t>(i)].row_weights(row)[k];
            }
            op.entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(begin + k)) = acc;
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(op.entries_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    op.u_ = svd.matrixU();
    op.v_ = svd.matrixV();
    op.singular_values_ = svd.singularValues();
    const double sigma_max = op.singular_values_.size() ? op.singular_values_(0) : 0.0;
    op.rank_tolerance_ = std::max(static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sigma_max,
                                  relative_rank_tolerance * sigma_max);
    op.rank_ = 0;
    for (Eigen::Index i = 0; i < op.singular_values_.size(); ++i) {
        if (op.singular_values_(i) > op.rank_tolerance_) {
            ++op.rank_;
        }
    }
    return op;
}

Eigen::MatrixXd LdoMatrix::null_basis() const {
    const auto k = static_cast<Eigen::Index>(null_dimension());
    return v_.rightCols(k);
}

Eigen::MatrixXd LdoMatrix::pseudo_inverse() const {
    const auto r = static_cast<Eigen::Index>(rank_);
    const Eigen::VectorXd inv = singular_values_.head(r).cwiseInverse();
    return v_.leftCols(r) * inv.asDiagonal() * u_.leftCols(r).transpose();
}

Eigen::VectorXd LdoMatrix::pseudo_inverse_apply(std::span<const double> g) const {
    if (g.size() != size()) {
        fail(ErrorCode::LengthMismatch,
             "right-hand side has " + std::to_string(g.size()) + " samples, operator expects " + std::to_string(size()));
    }
    const auto r = static_cast<Eigen::Index>(rank_);
    const Eigen::Map<const Eigen::VectorXd> rhs(g.data(), static_cast<Eigen::Index>(g.size()));
    const Eigen::VectorXd coords = (u_.leftCols(r).transpose() * rhs).cwiseQuotient(singular_values_.head(r));
    return v_.leftCols(r) * coords;
}

Eigen::VectorXd apply_ldo(const LdoMatrix& op, std::span<const double> x) {
    if (x.size() != op.size()) {
        fail(ErrorCode::LengthMismatch,
             "input has " + std::to_string(x.size()) + " samples, operator expects " + std::to_string(op.size()));
    }
    const auto& m = op.entries();
    Eigen::VectorXd out(static_cast<Eigen::Index>(op.size()));
    for (std::size_t row = 0; row < op.size(); ++row) {
        const std::size_t begin = op.row_begin(row);
        double acc = 0.0;
        for (std::size_t k = 0; k < op.row_width(); ++k) {
            acc += m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(begin + k)) * x[begin + k];
        }
        out(static_cast<Eigen::Index>(row)) = acc;
    }
    return out;
}

namespace {

void check_constraint_indices(const LdoMatrix& op, std::span<const std::size_t> indices) {
    if (indices.size() != op.null_dimension()) {
        fail(ErrorCode::ConstraintCountMismatch, "operator null space has dimension " +
                                                     std::to_string(op.null_dimension()) + " but " +
                                                     std::to_string(indices.size()) + " constraints were given");
    }
    std::vector<std::size_t> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= op.size()) {
            fail(ErrorCode::InvalidConstraint, "constraint index " + std::to_string(sorted[i]) +
                                                   " is outside the grid of " + std::to_string(op.size()) + " samples");
        }
        if (i > 0 && sorted[i] == sorted[i - 1]) {
            fail(ErrorCode::InvalidConstraint, "constraint index " + std::to_string(sorted[i]) + " is repeated");
        }
    }
}

// Constraint rows of the null basis, checked for numerical invertibility.
Eigen::MatrixXd constraint_block(const Eigen::MatrixXd& basis, std::span<const std::size_t> indices) {
    const auto k = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd block(k, basis.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
        block.row(i) = basis.row(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(i)]));
    }
    if (k > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
        const auto& s = svd.singularValues();
        if (!(s(0) > 0.0) || s(k - 1) <= 1e-10 * s(0)) {
            fail(ErrorCode::SingularConstraintSystem,
                 "constraint points do not determine the null-space coefficients (condition number exceeds 1e10)");
        }
    }
    return block;
}

}  // namespace

InverseSolution solve_inverse(const LdoMatrix& op, std::span<const double> g, std::span<const Constraint> constraints) {
    std::vector<std::size_t> indices;
    indices.reserve(constraints.size());
    for (const auto& c : constraints) {
        indices.push_back(c.index);
    }
    if (g.size() != op.size()) {
        fail(ErrorCode::LengthMismatch,
             "right-hand side has " + std::to_string(g.size()) + " samples, operator expects " + std::to_string(op.size()));
    }
    check_constraint_indices(op, indices);

    InverseSolution sol;
    sol.constraints.assign(constraints.begin(), constraints.end());
    sol.y_particular = op.pseudo_inverse_apply(g);
    const Eigen::MatrixXd basis = op.null_basis();
    const Eigen::MatrixXd block = constraint_block(basis, indices);

    const auto k = static_cast<Eigen::Index>(constraints.size());
    Eigen::VectorXd rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& c = constraints[static_cast<std::size_t>(i)];
        rhs(i) = c.value - sol.y_particular(static_cast<Eigen::Index>(c.index));
    }
    sol.alpha = k > 0 ? Eigen::VectorXd(block.fullPivLu().solve(rhs)) : Eigen::VectorXd(0);
    sol.y = sol.y_particular + basis * sol.alpha;
    const Eigen::Map<const Eigen::VectorXd> rhs_g(g.data(), static_cast<Eigen::Index>(g.size()));
    sol.residual = op.entries() * sol.y - rhs_g;
    return sol;
}

Eigen::MatrixXd solution_map(const LdoMatrix& op, std::span<const std::size_t> constraint_indices) {
    check_constraint_indices(op, constraint_indices);
    const Eigen::MatrixXd pinv = op.pseudo_inverse();
    const Eigen::MatrixXd basis = op.null_basis();
    const auto k = static_cast<Eigen::Index>(constraint_indices.size());
    if (k == 0) {
        return pinv;
    }
    const Eigen::MatrixXd block = constraint_block(basis, constraint_indices);
    Eigen::MatrixXd selected(k, pinv.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
        selected.row(i) = pinv.row(static_cast<Eigen::Index>(constraint_indices[static_cast<std::size_t>(i)]));
    }
    return pinv - basis * block.fullPivLu().solve(selected);
}

}  // namespace symts
