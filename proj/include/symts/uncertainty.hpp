#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>

#include "symts/ldo.hpp"

namespace symts {

/// Lambda_y = L Lambda_x L^T, symmetrized.
/// Throws DimensionMismatch, or NotSymmetric when Lambda_x departs from
/// symmetry by more than 1e-8 relative to its largest entry.
Eigen::MatrixXd propagate_forward(const Eigen::MatrixXd& op, const Eigen::MatrixXd& lambda_x);

/// Lambda_y = L^+ Lambda_g (L^+)^T. Pass solution_map() instead of the plain
/// pseudo-inverse to include the constraint correction.
Eigen::MatrixXd propagate_inverse(const Eigen::MatrixXd& pinv, const Eigen::MatrixXd& lambda_g);

struct ResidualVariance {
    double sigma2 = 0.0;
    std::size_t dof = 0;
};

/// sigma2 = r^T r / (n - rank). Throws InsufficientDof when n <= rank.
ResidualVariance estimate_residual_variance(std::span<const double> residual, std::size_t rank);

/// Pointwise band center +/- half_width.
struct ConfidenceBand {
    Eigen::VectorXd center;
    Eigen::VectorXd half_width;
    double level = 0.0;

    Eigen::VectorXd lower() const { return center - half_width; }
    Eigen::VectorXd upper() const { return center + half_width; }
};

/// half_width[j] = t(1 - (1-level)/2, dof) * sqrt(sigma2 * Lambda_y[j,j]).
/// Throws NegativeDiagonal for diagonal entries below -1e-10 * trace;
/// smaller negative values are clamped to zero.
ConfidenceBand confidence_band(std::span<const double> y, const Eigen::MatrixXd& lambda_y, double sigma2,
                               std::size_t dof, double level);

struct PredictionOptions {
    /// Fraction of trailing samples used for the fit when tail_window == 0.
    double tail_fraction = 0.25;
    std::size_t tail_window = 0;
    /// Largest accepted horizon; 0 means 10 * tail window.
    std::size_t max_horizon = 0;
    /// True when the covariance is in absolute units. Otherwise it is a
    /// shape only and gets scaled by the fitted residual variance.
    bool covariance_scale_known = false;
    double rank_tolerance = kDefaultRankTolerance;
};

/// Forecast `horizon` samples past the end of the grid.
///
/// The homogeneous solutions of the operator (its null space, computed on
/// the tail window extended by the horizon) are fit to the trailing window
/// of `y` by least squares and extrapolated. The variance at each future
/// sample is the propagated covariance of the fit plus the residual variance
/// of the fit; the half width is the t-quantile (dof = window - modes) times
/// its square root, made non-decreasing along the horizon.
///
/// `lambda_y` is the covariance of y (n x n). Throws HorizonTooLarge,
/// InsufficientDof and the errors of assemble_ldo.
ConfidenceBand prediction_band(std::span<const double> y, const Eigen::MatrixXd& lambda_y, const LdoMatrix& op,
                               std::size_t horizon, double level, const PredictionOptions& options = {});

/// Same, for an inverse solution whose data covariance is `lambda_g`; the
/// covariance of y is propagated through the constrained solution map.
ConfidenceBand prediction_band(const InverseSolution& solution, const LdoMatrix& op, const Eigen::MatrixXd& lambda_g,
                               std::size_t horizon, double level, const PredictionOptions& options = {});

}  // namespace symts
