#include "symts/stencil.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "symts/error.hpp"

namespace symts {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_rational exact_value(double x) {
    int exponent = 0;
    const double fraction = std::frexp(x, &exponent);
    const auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
    const int shift = exponent - 53;
    if (shift >= 0) {
        return cpp_rational(cpp_int(mantissa) << shift);
    }
    return cpp_rational(cpp_int(mantissa), cpp_int(1) << -shift);
}

// Round-to-nearest-even conversion.
double round_to_double(const cpp_rational& q) {
    if (q == 0) {
        return 0.0;
    }
    const bool negative = q < 0;
    cpp_int num = boost::multiprecision::numerator(q);
    cpp_int den = boost::multiprecision::denominator(q);
    if (num < 0) {
        num = -num;
    }
    const long e = static_cast<long>(msb(num)) - static_cast<long>(msb(den));
    long s = 54 - e;  // num * 2^s / den lies in [2^53, 2^55)
    if (s >= 0) {
        num <<= static_cast<unsigned>(s);
    } else {
        den <<= static_cast<unsigned>(-s);
    }
    cpp_int quotient;
    cpp_int remainder;
    divide_qr(num, den, quotient, remainder);

    bool sticky = remainder != 0;
    const cpp_int two54 = cpp_int(1) << 54;
    if (quotient >= two54) {
        sticky = sticky || bit_test(quotient, 0);
        quotient >>= 1;
        --s;
    }
    const bool round_bit = bit_test(quotient, 0);
    quotient >>= 1;
    --s;
    if (round_bit && (sticky || bit_test(quotient, 0))) {
        ++quotient;
    }
    const double magnitude = std::ldexp(static_cast<double>(quotient.convert_to<std::uint64_t>()), static_cast<int>(-s));
    return negative ? -magnitude : magnitude;
}

// Solves the (symmetric positive definite) system G z = e_order exactly.
std::vector<cpp_rational> solve_unit_rhs(std::vector<std::vector<cpp_rational>> g, std::size_t order) {
    const std::size_t size = g.size();
    std::vector<cpp_rational> rhs(size, cpp_rational(0));
    rhs[order] = 1;
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t pivot = col;
        while (pivot < size && g[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == size) {
            fail(ErrorCode::InvalidSpec, "stencil system is singular");
        }
        std::swap(g[pivot], g[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t row = col + 1; row < size; ++row) {
            if (g[row][col] == 0) {
                continue;
            }
            const cpp_rational factor = g[row][col] / g[col][col];
            for (std::size_t k = col; k < size; ++k) {
                g[row][k] -= factor * g[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<cpp_rational> z(size);
    for (std::size_t i = size; i-- > 0;) {
        cpp_rational acc = rhs[i];
        for (std::size_t k = i + 1; k < size; ++k) {
            acc -= g[i][k] * z[k];
        }
        z[i] = acc / g[i][i];
    }
    return z;
}

}  // namespace

std::size_t stencil_half_width(int accuracy) {
    return static_cast<std::size_t>((accuracy + 1) / 2);
}

std::vector<double> stencil_weights(int order, int accuracy, std::size_t window, std::size_t at, double h) {
    if (order < 0 || order > accuracy) {
        fail(ErrorCode::OrderExceedsAccuracy,
             "derivative order " + std::to_string(order) + " exceeds accuracy " + std::to_string(accuracy));
    }
    if (window <= static_cast<std::size_t>(accuracy) || at >= window) {
        fail(ErrorCode::GridTooShort, "stencil window of " + std::to_string(window) +
                                          " samples cannot carry a degree-" + std::to_string(accuracy) + " fit");
    }
    std::vector<double> weights(window, 0.0);
    if (order == 0) {
        weights[at] = 1.0;
        return weights;
    }

    const std::size_t terms = static_cast<std::size_t>(accuracy) + 1;
    // Vandermonde rows in offsets relative to the evaluation point.
    std::vector<std::vector<cpp_int>> vander(window, std::vector<cpp_int>(terms));
    for (std::size_t k = 0; k < window; ++k) {
        const cpp_int offset = cpp_int(static_cast<long>(k)) - static_cast<long>(at);
        cpp_int power = 1;
        for (std::size_t q = 0; q < terms; ++q) {
            vander[k][q] = power;
            power *= offset;
        }
    }
    std::vector<std::vector<cpp_rational>> normal(terms, std::vector<cpp_rational>(terms));
    for (std::size_t a = 0; a < terms; ++a) {
        for (std::size_t b = 0; b < terms; ++b) {
            cpp_int sum = 0;
            for (std::size_t k = 0; k < window; ++k) {
                sum += vander[k][a] * vander[k][b];
            }
            normal[a][b] = sum;
        }
    }
    const auto z = solve_unit_rhs(std::move(normal), static_cast<std::size_t>(order));

    cpp_int factorial = 1;
    for (int i = 2; i <= order; ++i) {
        factorial *= i;
    }
    cpp_rational scale = factorial;
    const cpp_rational step = exact_value(h);
    for (int i = 0; i < order; ++i) {
        scale /= step;
    }
    for (std::size_t k = 0; k < window; ++k) {
        cpp_rational acc = 0;
        for (std::size_t q = 0; q < terms; ++q) {
            acc += z[q] * vander[k][q];
        }
        weights[k] = round_to_double(acc * scale);
    }
    return weights;
}

}  // namespace symts
