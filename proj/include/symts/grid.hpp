#pragma once

#include <cstddef>

namespace symts {

/// Uniform sample grid: abscissae t0 + k*h for k in [0, n).
class Grid {
public:
    /// Throws InvalidGrid unless n >= 2 and h is finite and positive.
    Grid(std::size_t n, double h, double t0 = 0.0);

    std::size_t size() const noexcept { return n_; }
    double step() const noexcept { return h_; }
    double start() const noexcept { return t0_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * h_; }
    double end() const noexcept { return time(n_ - 1); }
    double rate() const noexcept { return 1.0 / h_; }

    /// Grid of `count` samples starting at sample `first` of this one (same step).
    Grid slice(std::size_t first, std::size_t count) const;

    bool operator==(const Grid&) const = default;

private:
    std::size_t n_;
    double h_;
    double t0_;
};

}  // namespace symts
