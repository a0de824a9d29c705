#include "symts/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "symts/error.hpp"
#include "symts/student_t.hpp"

namespace symts {

namespace {

void check_covariance(const Eigen::MatrixXd& op, const Eigen::MatrixXd& lambda) {
    if (lambda.rows() != lambda.cols()) {
        fail(ErrorCode::DimensionMismatch, "covariance must be square, got " + std::to_string(lambda.rows()) + "x" +
                                               std::to_string(lambda.cols()));
    }
    if (op.cols() != lambda.rows()) {
        fail(ErrorCode::DimensionMismatch, "operator has " + std::to_string(op.cols()) +
                                               " columns but covariance is " + std::to_string(lambda.rows()) + "x" +
                                               std::to_string(lambda.cols()));
    }
    if (lambda.size() == 0) {
        return;
    }
    const double scale = lambda.cwiseAbs().maxCoeff();
    const double asym = (lambda - lambda.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale) {
        fail(ErrorCode::NotSymmetric, "covariance asymmetry " + std::to_string(asym) + " exceeds 1e-8 relative");
    }
}

Eigen::MatrixXd sandwich(const Eigen::MatrixXd& op, const Eigen::MatrixXd& lambda) {
    check_covariance(op, lambda);
    const Eigen::MatrixXd m = op * lambda * op.transpose();
    return 0.5 * (m + m.transpose());
}

double two_sided_quantile(double level, std::size_t dof) {
    if (!(level > 0.0 && level < 1.0)) {
        fail(ErrorCode::InvalidProbability, "band level must lie strictly between 0 and 1");
    }
    return student_t_quantile(1.0 - (1.0 - level) / 2.0, static_cast<long>(dof));
}

}  // namespace

Eigen::MatrixXd propagate_forward(const Eigen::MatrixXd& op, const Eigen::MatrixXd& lambda_x) {
    return sandwich(op, lambda_x);
}

Eigen::MatrixXd propagate_inverse(const Eigen::MatrixXd& pinv, const Eigen::MatrixXd& lambda_g) {
    return sandwich(pinv, lambda_g);
}

ResidualVariance estimate_residual_variance(std::span<const double> residual, std::size_t rank) {
    if (residual.size() <= rank) {
        fail(ErrorCode::InsufficientDof, "residual of length " + std::to_string(residual.size()) +
                                             " leaves no degrees of freedom at rank " + std::to_string(rank));
    }
    double sum = 0.0;
    for (double r : residual) {
        sum += r * r;
    }
    const std::size_t dof = residual.size() - rank;
    return {sum / static_cast<double>(dof), dof};
}

ConfidenceBand confidence_band(std::span<const double> y, const Eigen::MatrixXd& lambda_y, double sigma2,
                               std::size_t dof, double level) {
    const auto n = static_cast<Eigen::Index>(y.size());
    if (lambda_y.rows() != n || lambda_y.cols() != n) {
        fail(ErrorCode::DimensionMismatch, "covariance is " + std::to_string(lambda_y.rows()) + "x" +
                                               std::to_string(lambda_y.cols()) + " for " + std::to_string(n) +
                                               " samples");
    }
    if (dof < 1) {
        fail(ErrorCode::InvalidDof, "confidence band needs at least one degree of freedom");
    }
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        fail(ErrorCode::InvalidSpec, "residual variance must be finite and non-negative");
    }
    const double quantile = two_sided_quantile(level, dof);
    const double floor = -1e-10 * std::fabs(lambda_y.trace());

    ConfidenceBand band;
    band.level = level;
    band.center = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    band.half_width.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double var = lambda_y(j, j);
        if (var < floor) {
            fail(ErrorCode::NegativeDiagonal,
                 "covariance diagonal at sample " + std::to_string(j) + " is " + std::to_string(var));
        }
        var = std::max(var, 0.0);
        band.half_width(j) = quantile * std::sqrt(sigma2 * var);
    }
    return band;
}

ConfidenceBand prediction_band(std::span<const double> y, const Eigen::MatrixXd& lambda_y, const LdoMatrix& op,
                               std::size_t horizon, double level, const PredictionOptions& options) {
    const std::size_t n = op.size();
    if (y.size() != n) {
        fail(ErrorCode::LengthMismatch,
             "signal has " + std::to_string(y.size()) + " samples, operator expects " + std::to_string(n));
    }
    if (lambda_y.rows() != static_cast<Eigen::Index>(n) || lambda_y.cols() != static_cast<Eigen::Index>(n)) {
        fail(ErrorCode::DimensionMismatch, "covariance of y must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    std::size_t window = options.tail_window;
    if (window == 0) {
        window = static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(n)));
    }
    if (window < 1 || window > n) {
        fail(ErrorCode::InvalidWindow, "tail window of " + std::to_string(window) + " samples does not fit a grid of " +
                                           std::to_string(n));
    }
    if (horizon < 1) {
        fail(ErrorCode::InvalidWindow, "prediction horizon must be at least 1");
    }
    const std::size_t max_horizon = options.max_horizon ? options.max_horizon : 10 * window;
    if (horizon > max_horizon) {
        fail(ErrorCode::HorizonTooLarge,
             "horizon " + std::to_string(horizon) + " exceeds the maximum of " + std::to_string(max_horizon));
    }

    const std::size_t first = n - window;
    const std::size_t extended = window + horizon;
    const LdoMatrix local = assemble_ldo(op.spec().window(first, extended), op.grid().slice(first, extended),
                                         op.accuracy(), options.rank_tolerance);
    const Eigen::MatrixXd modes = local.null_basis();
    const auto m = static_cast<Eigen::Index>(window);
    const auto h = static_cast<Eigen::Index>(horizon);
    const Eigen::MatrixXd fit = modes.topRows(m);
    const Eigen::MatrixXd future = modes.bottomRows(h);
    const Eigen::VectorXd tail = Eigen::Map<const Eigen::VectorXd>(y.data() + first, m);

    Eigen::MatrixXd fit_pinv = Eigen::MatrixXd::Zero(modes.cols(), m);
    std::size_t fit_rank = 0;
    if (modes.cols() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        const double tol = std::max(1e-12, options.rank_tolerance) * s(0);
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            if (s(i) > tol) {
                inv(i) = 1.0 / s(i);
                ++fit_rank;
            }
        }
        fit_pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
    }
    if (window <= fit_rank) {
        fail(ErrorCode::InsufficientDof, "tail window of " + std::to_string(window) + " samples cannot fit " +
                                             std::to_string(fit_rank) + " homogeneous modes with a residual");
    }
    const std::size_t dof = window - fit_rank;

    const Eigen::VectorXd coeffs = fit_pinv * tail;
    const Eigen::VectorXd resid = tail - fit * coeffs;
    const double sigma2 = resid.squaredNorm() / static_cast<double>(dof);
    Eigen::MatrixXd coeff_cov = fit_pinv * lambda_y.bottomRightCorner(m, m) * fit_pinv.transpose();
    if (!options.covariance_scale_known) {
        coeff_cov *= sigma2;
    }

    const double quantile = two_sided_quantile(level, dof);
    ConfidenceBand band;
    band.level = level;
    band.center = future * coeffs;
    band.half_width.resize(h);
    double widest = 0.0;
    for (Eigen::Index j = 0; j < h; ++j) {
        const double var = future.row(j).dot(coeff_cov * future.row(j).transpose()) + sigma2;
        widest = std::max(widest, quantile * std::sqrt(std::max(var, 0.0)));
        band.half_width(j) = widest;
    }
    return band;
}

ConfidenceBand prediction_band(const InverseSolution& solution, const LdoMatrix& op, const Eigen::MatrixXd& lambda_g,
                               std::size_t horizon, double level, const PredictionOptions& options) {
    std::vector<std::size_t> indices;
    for (const auto& c : solution.constraints) {
        indices.push_back(c.index);
    }
    const Eigen::MatrixXd lambda_y = propagate_inverse(solution_map(op, indices), lambda_g);
    return prediction_band(as_span(solution.y), lambda_y, op, horizon, level, options);
}

}  // namespace symts
