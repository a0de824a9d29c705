#include "symts/streaming.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "symts/diff_operator.hpp"
#include "symts/error.hpp"
#include "symts/stencil.hpp"

namespace symts {

LocalKernel extract_local_kernel(int order, int accuracy, double h) {
    if (order < 0 || order > accuracy) {
        fail(ErrorCode::OrderExceedsAccuracy,
             "derivative order " + std::to_string(order) + " exceeds accuracy " + std::to_string(accuracy));
    }
    if (!std::isfinite(h) || h <= 0.0) {
        fail(ErrorCode::InvalidGrid, "kernel step must be finite and positive");
    }
    const std::size_t w = stencil_half_width(accuracy);
    return LocalKernel{stencil_weights(order, accuracy, 2 * w + 1, w, h), order, accuracy, h};
}

StreamingFilter::StreamingFilter(LocalKernel kernel, BoundaryMode mode)
    : kernel_(std::move(kernel)), mode_(mode), ring_(kernel_.weights.size(), 0.0) {
    if (kernel_.weights.empty() || kernel_.weights.size() % 2 == 0) {
        fail(ErrorCode::InvalidSpec, "kernel must have an odd, nonzero number of taps");
    }
    if (mode_ == BoundaryMode::OneSided) {
        const std::size_t window = kernel_.weights.size();
        boundary_.reserve(window);
        for (std::size_t at = 0; at < window; ++at) {
            boundary_.push_back(stencil_weights(kernel_.order, kernel_.accuracy, window, at, kernel_.h));
        }
    }
}

void StreamingFilter::reset() {
    std::fill(ring_.begin(), ring_.end(), 0.0);
    head_ = 0;
    seen_ = 0;
    finished_ = false;
}

double StreamingFilter::window_sum(const std::vector<double>& weights) const {
    const std::size_t window = ring_.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
        std::size_t slot = head_ + k;
        if (slot >= window) {
            slot -= window;
        }
        acc += weights[k] * ring_[slot];
    }
    return acc;
}

void StreamingFilter::push(double sample, std::vector<double>& out) {
    if (finished_) {
        throw std::logic_error("StreamingFilter::push after finish; call reset() first");
    }
    const std::size_t window = ring_.size();
    ring_[head_] = sample;
    head_ = head_ + 1 == window ? 0 : head_ + 1;
    ++seen_;
    if (seen_ < window) {
        return;
    }
    const std::size_t w = kernel_.half_width();
    if (mode_ == BoundaryMode::OneSided && seen_ == window) {
        for (std::size_t at = 0; at < w; ++at) {
            out.push_back(window_sum(boundary_[at]));
        }
    }
    out.push_back(window_sum(kernel_.weights));
}

void StreamingFilter::finish(std::vector<double>& out) {
    if (finished_) {
        return;
    }
    finished_ = true;
    if (mode_ != BoundaryMode::OneSided) {
        return;
    }
    const std::size_t window = ring_.size();
    if (seen_ >= window) {
        for (std::size_t at = kernel_.half_width() + 1; at < window; ++at) {
            out.push_back(window_sum(boundary_[at]));
        }
        return;
    }
    // Short stream: the whole stream is one window, as in the dense operator.
    if (seen_ <= static_cast<std::size_t>(kernel_.accuracy)) {
        return;
    }
    std::vector<double> samples(ring_.begin(), ring_.begin() + static_cast<std::ptrdiff_t>(seen_));
    const auto op = DiffOperatorMatrix::build(Grid(seen_, kernel_.h), kernel_.order, kernel_.accuracy);
    const auto values = op.apply(samples);
    out.insert(out.end(), values.begin(), values.end());
}

std::vector<double> apply_streaming(const LocalKernel& kernel, std::span<const double> stream, BoundaryMode mode) {
    StreamingFilter filter(kernel, mode);
    std::vector<double> out;
    out.reserve(stream.size());
    for (double sample : stream) {
        filter.push(sample, out);
    }
    filter.finish(out);
    return out;
}

}  // namespace symts
