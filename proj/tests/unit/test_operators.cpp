#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "support/errors.hpp"
#include "support/oracles.hpp"
#include "symts/diff_operator.hpp"
#include "symts/error.hpp"
#include "symts/grid.hpp"
#include "symts/stencil.hpp"
#include "symts/streaming.hpp"

using namespace symts;
using testing::code_of;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("grid validation and slicing") {
    const Grid g(5, 0.5, 1.0);
    CHECK(g.size() == 5);
    CHECK(g.time(4) == 3.0);
    CHECK(g.end() == 3.0);
    CHECK(g.rate() == 2.0);
    CHECK(g.slice(2, 3) == Grid(3, 0.5, 2.0));
    CHECK(code_of([] { Grid(1, 1.0); }) == ErrorCode::InvalidGrid);
    CHECK(code_of([] { Grid(3, 0.0); }) == ErrorCode::InvalidGrid);
    CHECK(code_of([] { Grid(3, -1.0); }) == ErrorCode::InvalidGrid);
    CHECK(code_of([] { Grid(3, NAN); }) == ErrorCode::InvalidGrid);
    CHECK(code_of([] { Grid(3, 1.0, INFINITY); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("stencil half width") {
    CHECK(stencil_half_width(1) == 1);
    CHECK(stencil_half_width(2) == 1);
    CHECK(stencil_half_width(3) == 2);
    CHECK(stencil_half_width(4) == 2);
    CHECK(stencil_half_width(6) == 3);
}

TEST_CASE("classical stencils") {
    CHECK(stencil_weights(1, 2, 3, 1, 1.0) == std::vector<double>{-0.5, 0.0, 0.5});
    CHECK(stencil_weights(2, 2, 3, 1, 1.0) == std::vector<double>{1.0, -2.0, 1.0});
    CHECK(stencil_weights(1, 2, 3, 0, 1.0) == std::vector<double>{-1.5, 2.0, -0.5});
    CHECK(stencil_weights(1, 2, 3, 1, 0.5) == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(stencil_weights(1, 4, 5, 2, 1.0) ==
          std::vector<double>{1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0});
    CHECK(stencil_weights(0, 3, 5, 2, 0.1) == std::vector<double>{0.0, 0.0, 1.0, 0.0, 0.0});
    // Degree-1 least squares over three samples gives the central difference.
    CHECK(stencil_weights(1, 1, 3, 1, 1.0) == std::vector<double>{-0.5, 0.0, 0.5});
}

TEST_CASE("stencil errors") {
    CHECK(code_of([] { stencil_weights(3, 2, 5, 2, 1.0); }) == ErrorCode::OrderExceedsAccuracy);
    CHECK(code_of([] { stencil_weights(-1, 2, 5, 2, 1.0); }) == ErrorCode::OrderExceedsAccuracy);
    CHECK(code_of([] { stencil_weights(1, 2, 2, 0, 1.0); }) == ErrorCode::GridTooShort);
    CHECK(code_of([] { stencil_weights(1, 2, 3, 3, 1.0); }) == ErrorCode::GridTooShort);
}

TEST_CASE("stencils are exact on polynomials up to their degree") {
    for (int acc = 1; acc <= 6; ++acc) {
        const std::size_t window = 2 * stencil_half_width(acc) + 1;
        for (int order = 0; order <= acc; ++order) {
            for (std::size_t at = 0; at < window; ++at) {
                const auto w = stencil_weights(order, acc, window, at, 1.0);
                for (int k = 0; k <= acc; ++k) {
                    // t^k on t = -at, ..., window-1-at; derivative at t = 0 is k! if k == order.
                    long double sum = 0.0L;
                    for (std::size_t j = 0; j < window; ++j) {
                        sum += w[j] * std::pow(static_cast<long double>(j) - static_cast<long double>(at), k);
                    }
                    long double expected = 0.0L;
                    if (k == order) {
                        expected = std::tgamma(static_cast<long double>(k) + 1.0L);
                    }
                    CAPTURE(acc);
                    CAPTURE(order);
                    CAPTURE(at);
                    CAPTURE(k);
                    CHECK(std::fabs(static_cast<double>(sum - expected)) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("derivative matrix structure") {
    const Grid g(10, 0.1);
    const auto d = DiffOperatorMatrix::build(g, 1, 2);
    CHECK(d.support() == 1);
    CHECK(d.window() == 3);
    CHECK(d.row_begin(0) == 0);
    CHECK(d.row_begin(5) == 4);
    CHECK(d.row_begin(9) == 7);
    const Eigen::MatrixXd m = d.dense();
    for (std::size_t r = 0; r < 10; ++r) {
        const auto w = d.row_weights(r);
        for (std::size_t c = 0; c < 10; ++c) {
            const bool inside = c >= d.row_begin(r) && c < d.row_begin(r) + d.window();
            CHECK(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) ==
                  (inside ? w[c - d.row_begin(r)] : 0.0));
        }
    }
    CHECK(code_of([&] { d.apply(std::vector<double>(9)); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([] { DiffOperatorMatrix::build(Grid(3, 1.0), 1, 3); }) == ErrorCode::GridTooShort);
    CHECK(code_of([] { build_diff_operator(Grid(10, 1.0), 3, 2); }) == ErrorCode::OrderExceedsAccuracy);

    // Short grid: the window shrinks to the whole grid.
    const auto s = DiffOperatorMatrix::build(Grid(4, 1.0), 1, 3);
    CHECK(s.window() == 4);
    CHECK(s.row_begin(3) == 0);
}

TEST_CASE("derivative matrices on random polynomials") {
    std::mt19937_64 rng(11);
    for (int acc = 1; acc <= 4; ++acc) {
        for (int order = 0; order <= acc; ++order) {
            const Grid g(16, 0.25, -1.0);
            const auto d = DiffOperatorMatrix::build(g, order, acc);
            const auto p = oracle::random_polynomial(acc, g.start(), g.end(), rng);
            std::vector<double> y(g.size());
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = static_cast<double>(p.value(g.time(k)));
            const auto dy = d.apply(y);
            long double scale = 1.0L;
            for (std::size_t k = 0; k < y.size(); ++k) {
                scale = std::max(scale, std::fabs(p.derivative(order, g.time(k))));
            }
            for (std::size_t k = 0; k < y.size(); ++k) {
                const long double exact = p.derivative(order, g.time(k));
                CAPTURE(acc);
                CAPTURE(order);
                CAPTURE(k);
                CHECK(std::fabs(static_cast<double>((dy[k] - exact) / scale)) < 1e-9);
            }
        }
    }
}

TEST_CASE("derivative of low-degree polynomials vanishes") {
    const Grid g(40, 1.0);
    for (int acc = 2; acc <= 6; ++acc) {
        for (int order = 1; order <= acc; ++order) {
            const auto d = DiffOperatorMatrix::build(g, order, acc);
            std::vector<double> y(g.size());
            for (std::size_t k = 0; k < y.size(); ++k) {
                const double t = (static_cast<double>(k) - 20.0) / 20.0;
                y[k] = order == 1 ? 0.75 : 0.75 + 0.5 * t;
            }
            for (double v : d.apply(y)) CHECK(std::fabs(v) < 1e-9);
        }
    }
}

TEST_CASE("apply equals the naive dense product bitwise") {
    const Grid g(57, 0.01);
    const auto x = random_vector(g.size(), 3);
    for (int acc = 1; acc <= 6; ++acc) {
        for (int order = 0; order <= std::min(acc, 3); ++order) {
            const auto d = DiffOperatorMatrix::build(g, order, acc);
            CHECK(same_bits(d.apply(x), oracle::dense_apply(d.dense(), x)));
        }
    }
}

TEST_CASE("local kernel is the central row") {
    for (int acc = 1; acc <= 6; ++acc) {
        for (int order = 0; order <= acc; ++order) {
            const auto k = extract_local_kernel(order, acc, 0.02);
            const auto d = DiffOperatorMatrix::build(Grid(20, 0.02), order, acc);
            const auto row = d.row_weights(10);
            CHECK(k.half_width() == d.support());
            CHECK(same_bits(k.weights, std::vector<double>(row.begin(), row.end())));
        }
    }
    CHECK(code_of([] { extract_local_kernel(3, 2, 1.0); }) == ErrorCode::OrderExceedsAccuracy);
    CHECK(code_of([] { extract_local_kernel(1, 2, 0.0); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("streaming valid mode matches dense interior rows bitwise") {
    const Grid g(700, 0.003);
    const auto x = random_vector(g.size(), 5);
    for (int acc = 1; acc <= 6; ++acc) {
        for (int order = 0; order <= std::min(acc, 3); ++order) {
            const auto kernel = extract_local_kernel(order, acc, g.step());
            const auto stream = apply_streaming(kernel, x, BoundaryMode::Valid);
            const auto dense = oracle::dense_apply(DiffOperatorMatrix::build(g, order, acc).dense(), x);
            const std::size_t w = kernel.half_width();
            REQUIRE(stream.size() == g.size() - 2 * w);
            CHECK(same_bits(stream, std::vector<double>(dense.begin() + static_cast<long>(w), dense.end() - static_cast<long>(w))));
        }
    }
}

TEST_CASE("streaming one-sided mode reproduces every row") {
    const Grid g(123, 0.5);
    const auto x = random_vector(g.size(), 6);
    for (int acc = 1; acc <= 6; ++acc) {
        for (int order = 0; order <= acc; ++order) {
            const auto kernel = extract_local_kernel(order, acc, g.step());
            CHECK(same_bits(apply_streaming(kernel, x, BoundaryMode::OneSided),
                            DiffOperatorMatrix::build(g, order, acc).apply(x)));
        }
    }
}

TEST_CASE("streaming latency and lifecycle") {
    const auto kernel = extract_local_kernel(1, 4, 1.0);
    StreamingFilter f(kernel);
    CHECK(f.latency() == 2);
    std::vector<double> out;
    for (int i = 0; i < 4; ++i) f.push(i, out);
    CHECK(out.empty());
    f.push(4.0, out);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == doctest::Approx(1.0));
    f.finish(out);
    CHECK(out.size() == 1);
    CHECK_THROWS_AS(f.push(5.0, out), std::logic_error);
    f.reset();
    out.clear();
    for (int i = 0; i < 5; ++i) f.push(2.0 * i, out);
    CHECK(out.size() == 1);
    CHECK(out[0] == doctest::Approx(2.0));
}

TEST_CASE("short streams") {
    const auto kernel = extract_local_kernel(1, 4, 1.0);
    const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
    CHECK(apply_streaming(kernel, x, BoundaryMode::Valid).empty());
    // Four samples still fit a degree-3 interpolant, but not degree 4.
    CHECK(apply_streaming(kernel, x, BoundaryMode::OneSided).empty());
    const auto k3 = extract_local_kernel(1, 3, 1.0);
    CHECK(same_bits(apply_streaming(k3, x, BoundaryMode::OneSided), DiffOperatorMatrix::build(Grid(4, 1.0), 1, 3).apply(x)));
    CHECK(apply_streaming(kernel, std::vector<double>{}, BoundaryMode::OneSided).empty());
}
