#include "symts/student_t.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "symts/error.hpp"

namespace symts {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Continued fraction for I_x(a, b); converges quickly for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 100000;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

// I_x(a, b) with y = 1 - x supplied separately to avoid cancellation.
double incomplete_beta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

// P(T > t) for t >= 0.
double upper_tail(double t, double nu) {
    const double t2 = t * t;
    const double x = nu / (nu + t2);
    const double y = t2 / (nu + t2);
    return 0.5 * incomplete_beta(0.5 * nu, 0.5, x, y);
}

void check_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        fail(ErrorCode::InvalidProbability, "probability must lie strictly between 0 and 1, got " + std::to_string(p));
    }
}

// Largest t >= 0 with tail(t) >= target, for a decreasing tail function.
double invert_tail(const std::function<double(double)>& tail, double target) {
    double lo = 0.0;
    double hi = 1.0;
    while (tail(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            return std::numeric_limits<double>::infinity();
        }
    }
    for (int it = 0; it < 200 && hi - lo > 2.0 * kEps * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        fail(ErrorCode::InvalidSpec, "incomplete beta needs a, b > 0 and x in [0, 1]");
    }
    return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_cdf(double t, long dof) {
    if (dof < 1) {
        fail(ErrorCode::InvalidDof, "degrees of freedom must be at least 1, got " + std::to_string(dof));
    }
    if (std::isnan(t)) {
        return t;
    }
    const double nu = static_cast<double>(dof);
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    return t >= 0.0 ? 1.0 - upper_tail(t, nu) : upper_tail(-t, nu);
}

double student_t_quantile(double p, long dof) {
    check_probability(p);
    if (dof < 1) {
        fail(ErrorCode::InvalidDof, "degrees of freedom must be at least 1, got " + std::to_string(dof));
    }
    if (p == 0.5) {
        return 0.0;
    }
    if (p < 0.5) {
        return -student_t_quantile(1.0 - p, dof);
    }
    const double nu = static_cast<double>(dof);
    return invert_tail([nu](double t) { return upper_tail(t, nu); }, 1.0 - p);
}

double normal_quantile(double p) {
    check_probability(p);
    if (p == 0.5) {
        return 0.0;
    }
    if (p < 0.5) {
        return -normal_quantile(1.0 - p);
    }
    return invert_tail([](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }, 1.0 - p);
}

}  // namespace symts
