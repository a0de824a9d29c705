#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support/errors.hpp"
#include "support/oracles.hpp"
#include "symts/ldo.hpp"
#include "symts/student_t.hpp"
#include "symts/uncertainty.hpp"

using namespace symts;
using testing::code_of;

TEST_CASE("student t quantiles against frozen high-precision values") {
    for (const auto& row : oracle::t_quantile_table()) {
        CAPTURE(row.dof);
        CAPTURE(row.p);
        const double q = student_t_quantile(row.p, row.dof);
        CHECK(std::abs(q - row.t) <= 1e-8);
        // The lower tail mirrors the upper one.
        CHECK(student_t_quantile(1.0 - row.p, row.dof) == doctest::Approx(-row.t).epsilon(1e-9));
        CHECK(student_t_cdf(q, row.dof) == doctest::Approx(row.p).epsilon(1e-12));
    }
    CHECK(student_t_quantile(0.5, 7) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("student t cdf properties") {
    for (long dof : {1L, 3L, 12L, 250L}) {
        for (double t : {0.1, 0.7, 2.5, 9.0}) {
            CHECK(student_t_cdf(t, dof) + student_t_cdf(-t, dof) == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK(student_t_cdf(0.0, dof) == doctest::Approx(0.5));
    }
    // dof = 1 is the Cauchy distribution.
    CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-13));
    // Large dof approaches the normal.
    CHECK(student_t_quantile(0.975, 1000000) == doctest::Approx(oracle::kNormalQuantile975).epsilon(1e-5));
}

TEST_CASE("incomplete beta identities") {
    for (double x : {0.0, 0.1, 0.5, 0.93, 1.0}) {
        CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
        CHECK(regularized_incomplete_beta(2.5, 0.7, x) + regularized_incomplete_beta(0.7, 2.5, 1.0 - x) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
    // I_x(a, 1) = x^a.
    CHECK(regularized_incomplete_beta(3.0, 1.0, 0.4) == doctest::Approx(0.064).epsilon(1e-13));
}

TEST_CASE("normal quantile") {
    CHECK(std::abs(normal_quantile(0.975) - oracle::kNormalQuantile975) <= 1e-9);
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(normal_quantile(0.025) == doctest::Approx(-oracle::kNormalQuantile975).epsilon(1e-9));
}

TEST_CASE("quantile argument errors") {
    CHECK(code_of([] { student_t_quantile(0.0, 3); }) == ErrorCode::InvalidProbability);
    CHECK(code_of([] { student_t_quantile(1.0, 3); }) == ErrorCode::InvalidProbability);
    CHECK(code_of([] { student_t_quantile(NAN, 3); }) == ErrorCode::InvalidProbability);
    CHECK(code_of([] { student_t_quantile(0.9, 0); }) == ErrorCode::InvalidDof);
    CHECK(code_of([] { normal_quantile(1.5); }) == ErrorCode::InvalidProbability);
}

TEST_CASE("covariance propagation") {
    Eigen::MatrixXd l(2, 3);
    l << 1, 2, 0, 0, -1, 3;
    Eigen::MatrixXd lx(3, 3);
    lx << 2, 0.5, 0, 0.5, 1, 0.1, 0, 0.1, 4;
    const Eigen::MatrixXd ly = propagate_forward(l, lx);
    const Eigen::MatrixXd expected = l * lx * l.transpose();
    CHECK((ly - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(ly == ly.transpose());

    const LdoMatrix op = assemble_ldo(LdoSpec::derivative(1), Grid(12, 0.5), 2);
    const Eigen::MatrixXd pinv = op.pseudo_inverse();
    const Eigen::MatrixXd iso = propagate_inverse(pinv, Eigen::MatrixXd::Identity(12, 12));
    CHECK((iso - pinv * pinv.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK(code_of([&] { propagate_forward(l, Eigen::MatrixXd::Identity(2, 2)); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { propagate_forward(l, Eigen::MatrixXd::Identity(3, 2)); }) == ErrorCode::DimensionMismatch);
    Eigen::MatrixXd skew = lx;
    skew(0, 1) += 1e-3;
    CHECK(code_of([&] { propagate_forward(l, skew); }) == ErrorCode::NotSymmetric);
    // Roundoff-level asymmetry is tolerated.
    skew = lx;
    skew(0, 1) += 1e-14;
    CHECK_NOTHROW(propagate_forward(l, skew));
}

TEST_CASE("residual variance") {
    const std::vector<double> r = {1.0, -2.0, 2.0, 0.0};
    const auto v = estimate_residual_variance(r, 1);
    CHECK(v.dof == 3);
    CHECK(v.sigma2 == doctest::Approx(3.0));
    CHECK(code_of([&] { estimate_residual_variance(r, 4); }) == ErrorCode::InsufficientDof);
}

TEST_CASE("confidence band arithmetic") {
    const std::vector<double> y = {1.0, 2.0, 3.0};
    Eigen::MatrixXd ly = Eigen::MatrixXd::Zero(3, 3);
    ly.diagonal() << 1.0, 4.0, 0.0;
    const ConfidenceBand band = confidence_band(y, ly, 0.25, 10, 0.95);
    const double t = oracle::t_quantile_table()[14].t;  // dof 10, p 0.975
    CHECK(band.half_width(0) == doctest::Approx(t * 0.5).epsilon(1e-10));
    CHECK(band.half_width(1) == doctest::Approx(t * 1.0).epsilon(1e-10));
    CHECK(band.half_width(2) == 0.0);
    CHECK(band.lower()(1) == doctest::Approx(2.0 - t));
    CHECK(band.upper()(0) == doctest::Approx(1.0 + 0.5 * t));
    CHECK(band.level == 0.95);

    // Wider level, wider band.
    const ConfidenceBand wide = confidence_band(y, ly, 0.25, 10, 0.99);
    CHECK(wide.half_width(1) > band.half_width(1));

    Eigen::MatrixXd neg = ly;
    neg(2, 2) = -1.0;
    CHECK(code_of([&] { confidence_band(y, neg, 1.0, 5, 0.95); }) == ErrorCode::NegativeDiagonal);
    neg(2, 2) = -1e-14;
    CHECK(confidence_band(y, neg, 1.0, 5, 0.95).half_width(2) == 0.0);
    CHECK(code_of([&] { confidence_band(y, ly, 1.0, 0, 0.95); }) == ErrorCode::InvalidDof);
    CHECK(code_of([&] { confidence_band(y, ly, 1.0, 5, 1.0); }) == ErrorCode::InvalidProbability);
    CHECK(code_of([&] { confidence_band(y, Eigen::MatrixXd::Identity(2, 2), 1.0, 5, 0.9); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("prediction band extrapolates homogeneous solutions") {
    // A line is in the null space of D2, so a clean line is extrapolated exactly.
    const Grid grid(60, 0.1);
    const LdoMatrix op = assemble_ldo(LdoSpec::derivative(2), grid, 2);
    std::vector<double> y(grid.size());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = 2.0 - 0.5 * grid.time(k);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 1e-3);
    for (auto& v : y) v += nd(rng);
    const Eigen::MatrixXd ly = Eigen::MatrixXd::Identity(60, 60);
    const ConfidenceBand band = prediction_band(y, ly, op, 10, 0.95);
    REQUIRE(band.center.size() == 10);
    for (Eigen::Index j = 0; j < 10; ++j) {
        const double t = grid.time(59) + static_cast<double>(j + 1) * 0.1;
        CHECK(std::abs(band.center(j) - (2.0 - 0.5 * t)) <= 0.01);
        CHECK(band.half_width(j) > 0.0);
        if (j > 0) CHECK(band.half_width(j) >= band.half_width(j - 1));
    }
    // Without noise the band collapses.
    std::vector<double> clean(grid.size());
    for (std::size_t k = 0; k < clean.size(); ++k) clean[k] = 1.0 + 3.0 * grid.time(k);
    const ConfidenceBand exact = prediction_band(clean, ly, op, 5, 0.95);
    CHECK(std::abs(exact.center(4) - (1.0 + 3.0 * (grid.time(59) + 0.5))) <= 1e-9);
    CHECK(exact.half_width.maxCoeff() <= 1e-6);

    // A known covariance scale keeps the band open even for clean data.
    PredictionOptions known;
    known.covariance_scale_known = true;
    CHECK(prediction_band(clean, ly, op, 5, 0.95, known).half_width(0) > 0.1);
}

TEST_CASE("prediction band errors") {
    const Grid grid(20, 1.0);
    const LdoMatrix op = assemble_ldo(LdoSpec::derivative(2), grid, 2);
    const std::vector<double> y(20, 1.0);
    const Eigen::MatrixXd ly = Eigen::MatrixXd::Identity(20, 20);
    PredictionOptions opts;
    opts.tail_window = 5;
    CHECK(code_of([&] { prediction_band(y, ly, op, 51, 0.95, opts); }) == ErrorCode::HorizonTooLarge);
    CHECK_NOTHROW(prediction_band(y, ly, op, 50, 0.95, opts));
    opts.max_horizon = 3;
    CHECK(code_of([&] { prediction_band(y, ly, op, 4, 0.95, opts); }) == ErrorCode::HorizonTooLarge);
    CHECK(code_of([&] { prediction_band(y, ly, op, 0, 0.95, opts); }) == ErrorCode::InvalidWindow);
    opts.tail_window = 21;
    CHECK(code_of([&] { prediction_band(y, ly, op, 1, 0.95, opts); }) == ErrorCode::InvalidWindow);
    opts.tail_window = 2;
    CHECK(code_of([&] { prediction_band(y, ly, op, 1, 0.95, opts); }) == ErrorCode::InsufficientDof);
    CHECK(code_of([&] { prediction_band(std::vector<double>(19), ly, op, 1, 0.95); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { prediction_band(y, Eigen::MatrixXd::Identity(3, 3), op, 1, 0.95); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("prediction band from an inverse solution") {
    const Grid grid(40, 0.1);
    const LdoMatrix op = assemble_ldo(LdoSpec::derivative(1), grid, 2);
    const std::vector<double> g(40, 2.0);
    const std::vector<Constraint> c = {{0, 1.0}};
    const InverseSolution sol = solve_inverse(op, g, c);
    const ConfidenceBand band = prediction_band(sol, op, 0.01 * Eigen::MatrixXd::Identity(40, 40), 4, 0.9);
    // The homogeneous solutions of D1 are constants, so the forecast is the tail mean.
    const double mean = sol.y.tail(10).mean();
    CHECK(band.center(3) == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("propagation examples") {
    Eigen::MatrixXd lx(3, 3);
    lx << 1.0, 0.2, 0.0, 0.2, 2.0, -0.3, 0.0, -0.3, 0.5;
    CHECK(propagate_forward(Eigen::MatrixXd::Identity(3, 3), lx) == lx);
    const Eigen::MatrixXd scaled = propagate_forward(2.5 * Eigen::MatrixXd::Identity(3, 3), lx);
    CHECK((scaled - 6.25 * lx).cwiseAbs().maxCoeff() <= 1e-12 * 6.25 * lx.cwiseAbs().maxCoeff());
    CHECK(propagate_inverse(Eigen::MatrixXd::Identity(3, 3), lx) == lx);

    // Diagonal operator: variances divide by the squared entries.
    const LdoMatrix diag = assemble_ldo(LdoSpec{0, {std::vector<double>{2, -4, 0.5}}}, Grid(3, 1.0), 2);
    const Eigen::MatrixXd inv = propagate_inverse(diag.pseudo_inverse(), 0.09 * Eigen::MatrixXd::Identity(3, 3));
    CHECK(inv(0, 0) == doctest::Approx(0.09 / 4));
    CHECK(inv(1, 1) == doctest::Approx(0.09 / 16));
    CHECK(inv(2, 2) == doctest::Approx(0.09 / 0.25));
    CHECK(std::abs(inv(0, 1)) <= 1e-15);

    // Scaling law for a non-trivial operator.
    const Eigen::MatrixXd d1 = assemble_ldo(LdoSpec::derivative(1), Grid(20, 0.1), 2).entries();
    const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(20, 20) + 0.1 * Eigen::MatrixXd::Ones(20, 20);
    const Eigen::MatrixXd base = propagate_forward(d1, w);
    CHECK((propagate_forward(-3.0 * d1, w) - 9.0 * base).cwiseAbs().maxCoeff() <= 1e-12 * 9.0 * base.cwiseAbs().maxCoeff());
}

TEST_CASE("propagated covariance stays symmetric and positive semidefinite") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd a(15, 15);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = nd(rng);
        const Eigen::MatrixXd lx = a * a.transpose();
        Eigen::MatrixXd l(10, 15);
        for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = nd(rng);
        const Eigen::MatrixXd ly = propagate_forward(l, lx);
        CHECK(ly == ly.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ly);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * ly.trace());
    }
}

TEST_CASE("monte carlo agreement of forward propagation") {
    const Eigen::MatrixXd d1 = assemble_ldo(LdoSpec::derivative(1), Grid(50, 1.0), 2).entries();
    const double sigma = 0.1;
    const Eigen::MatrixXd predicted = propagate_forward(d1, sigma * sigma * Eigen::MatrixXd::Identity(50, 50));
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> nd(0.0, sigma);
    const int trials = 20000;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(50);
    Eigen::VectorXd sum2 = Eigen::VectorXd::Zero(50);
    Eigen::VectorXd x(50);
    for (int t = 0; t < trials; ++t) {
        for (Eigen::Index k = 0; k < 50; ++k) x(k) = nd(rng);
        const Eigen::VectorXd y = d1 * x;
        sum += y;
        sum2 += y.cwiseProduct(y);
    }
    const Eigen::VectorXd mean = sum / trials;
    const Eigen::VectorXd var = (sum2 - trials * mean.cwiseProduct(mean)) / (trials - 1);
    for (Eigen::Index k = 0; k < 50; ++k) {
        CHECK(std::abs(var(k) / predicted(k, k) - 1.0) <= 0.1);
    }
}

TEST_CASE("residual variance examples") {
    CHECK(estimate_residual_variance(std::vector<double>(5, 0.0), 2).sigma2 == 0.0);
    const auto v = estimate_residual_variance(std::vector<double>{1, -1, 1, -1}, 0);
    CHECK(v.sigma2 == 1.0);
    CHECK(v.dof == 4);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd;
    std::vector<double> r(10000);
    for (auto& x : r) x = nd(rng);
    const double s2 = estimate_residual_variance(r, 2).sigma2;
    CHECK(s2 >= 0.95);
    CHECK(s2 <= 1.05);
}

TEST_CASE("confidence band examples") {
    const std::vector<double> y = {0.0, 1.0, -2.0, 5.0};
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(4, 4);
    const ConfidenceBand band = confidence_band(y, ident, 1.0, 10, 0.95);
    for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(band.half_width(j) == doctest::Approx(2.2281388519862747484).epsilon(1e-9));
    }
    CHECK(confidence_band(y, ident, 1.0, 10, 1e-9).half_width.maxCoeff() <= 1e-8);
    double previous = 0.0;
    for (double level : {0.1, 0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        const double w = confidence_band(y, ident, 1.0, 7, level).half_width(0);
        CHECK(w > previous);
        previous = w;
    }
}

TEST_CASE("prediction of a noisy constant") {
    const Grid grid(200, 0.1);
    const LdoMatrix op = assemble_ldo(LdoSpec::derivative(1), grid, 2);
    const double sigma = 0.2;
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd(0.0, sigma);
    std::vector<double> y(grid.size());
    for (auto& v : y) v = 4.0 + nd(rng);
    const ConfidenceBand band = prediction_band(y, Eigen::MatrixXd::Identity(200, 200), op, 10, 0.95);
    const double window = 50.0;  // default tail fraction 0.25
    for (Eigen::Index j = 0; j < 10; ++j) {
        CHECK(std::abs(band.center(j) - 4.0) <= 3.0 * sigma / std::sqrt(window));
    }
}
