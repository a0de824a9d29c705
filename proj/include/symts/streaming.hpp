#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace symts {

/// Central stencil of a derivative operator, usable as a convolution kernel.
struct LocalKernel {
    std::vector<double> weights;  // 2w+1 taps, oldest sample first
    int order = 0;
    int accuracy = 0;
    double h = 1.0;

    std::size_t half_width() const noexcept { return weights.size() / 2; }
};

/// Throws OrderExceedsAccuracy unless 0 <= order <= accuracy; InvalidGrid for h <= 0.
LocalKernel extract_local_kernel(int order, int accuracy, double h);

enum class BoundaryMode {
    Valid,     // emit only outputs whose full window is available
    OneSided,  // also emit the first/last w outputs with shifted stencils
};

/// Incremental convolution with a local kernel.
///
/// Output j is emitted once samples j-w..j+w have arrived (latency w). In
/// Valid mode the first emitted output belongs to input sample w. Each
/// output sums its window left to right, which makes it bitwise equal to
/// the matching row of DiffOperatorMatrix::apply.
class StreamingFilter {
public:
    explicit StreamingFilter(LocalKernel kernel, BoundaryMode mode = BoundaryMode::Valid);

    /// Feeds one sample; appends any outputs that became ready to `out`.
    void push(double sample, std::vector<double>& out);
    /// Signals end of stream; appends trailing boundary outputs (OneSided only).
    void finish(std::vector<double>& out);
    /// Clears all per-stream state.
    void reset();

    const LocalKernel& kernel() const noexcept { return kernel_; }
    BoundaryMode mode() const noexcept { return mode_; }
    std::size_t latency() const noexcept { return kernel_.half_width(); }
    std::size_t samples_seen() const noexcept { return seen_; }

private:
    double window_sum(const std::vector<double>& weights) const;

    LocalKernel kernel_;
    BoundaryMode mode_;
    std::vector<std::vector<double>> boundary_;  // stencils by evaluation position, OneSided only
    std::vector<double> ring_;
    std::size_t head_ = 0;  // next write slot
    std::size_t seen_ = 0;
    bool finished_ = false;
};

/// Batch convenience wrapper around StreamingFilter.
std::vector<double> apply_streaming(const LocalKernel& kernel, std::span<const double> stream,
                                    BoundaryMode mode = BoundaryMode::Valid);

}  // namespace symts
