#include "symts/mcla.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symts/error.hpp"

namespace symts {

MultiStream::MultiStream(std::vector<std::string> channels, std::string symbols, double start, double step)
    : channels_(std::move(channels)), symbols_(std::move(symbols)), start_(start), step_(step) {
    if (channels_.empty()) {
        fail(ErrorCode::EmptyInput, "multistream needs at least one channel");
    }
    if (symbols_.size() % channels_.size() != 0) {
        fail(ErrorCode::LengthMismatch, "symbol count " + std::to_string(symbols_.size()) +
                                            " is not a multiple of arity " + std::to_string(channels_.size()));
    }
}

std::string_view MultiStream::tuple(std::size_t j) const {
    return std::string_view(symbols_).substr(j * arity(), arity());
}

std::string MultiStream::channel(std::size_t i) const {
    std::string out;
    out.reserve(size());
    for (std::size_t j = i; j < symbols_.size(); j += arity()) {
        out.push_back(symbols_[j]);
    }
    return out;
}

MultiStream align_and_combine(std::span<const SymbolStream> streams, std::span<const Grid> grids,
                              std::vector<std::string> names) {
    if (streams.empty()) {
        fail(ErrorCode::EmptyInput, "no streams to combine");
    }
    if (grids.size() != streams.size()) {
        fail(ErrorCode::LengthMismatch,
             std::to_string(streams.size()) + " streams but " + std::to_string(grids.size()) + " grids");
    }
    if (names.empty()) {
        for (std::size_t i = 0; i < streams.size(); ++i) {
            names.push_back(std::to_string(i));
        }
    } else if (names.size() != streams.size()) {
        fail(ErrorCode::LengthMismatch,
             std::to_string(streams.size()) + " streams but " + std::to_string(names.size()) + " names");
    }

    // Each stream covers [t0, t0 + (len-1) h] with its own grid spacing.
    double lo = -INFINITY;
    double hi = INFINITY;
    std::size_t coarse = 0;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        if (streams[i].size() == 0) {
            fail(ErrorCode::EmptyInput, "stream " + names[i] + " is empty");
        }
        if (grids[i].size() != streams[i].size()) {
            fail(ErrorCode::LengthMismatch, "stream " + names[i] + " has " + std::to_string(streams[i].size()) +
                                                " symbols but its grid has " + std::to_string(grids[i].size()) +
                                                " samples");
        }
        const double t0 = grids[i].start();
        const double h = grids[i].step();
        lo = std::max(lo, t0);
        hi = std::min(hi, t0 + static_cast<double>(streams[i].size() - 1) * h);
        if (h > grids[coarse].step()) {
            coarse = i;
        }
    }
    const double h = grids[coarse].step();
    const double t0 = grids[coarse].start();
    const double slack = 1e-9 * h;
    if (lo > hi + slack) {
        fail(ErrorCode::NoOverlap, "streams share no common time range");
    }

    const auto index_at = [](const Grid& g, double t) {
        return static_cast<std::size_t>(std::floor((t - g.start()) / g.step() + 1e-9));
    };
    const std::size_t first = static_cast<std::size_t>(std::ceil((lo - t0) / h - 1e-9));
    const double last_pos = std::floor((hi - t0) / h + 1e-9);
    if (last_pos < static_cast<double>(first)) {
        fail(ErrorCode::NoOverlap, "common time range contains no sample of the coarsest grid");
    }
    const std::size_t count = static_cast<std::size_t>(last_pos) - first + 1;

    std::string symbols;
    symbols.reserve(count * streams.size());
    for (std::size_t k = 0; k < count; ++k) {
        const double t = t0 + static_cast<double>(first + k) * h;
        for (std::size_t i = 0; i < streams.size(); ++i) {
            const std::size_t idx = std::min(index_at(grids[i], t), streams[i].size() - 1);
            symbols.push_back(streams[i].symbols[idx]);
        }
    }
    return MultiStream(std::move(names), std::move(symbols), t0 + static_cast<double>(first) * h, h);
}

void FrequencyDict::add(const std::string& key, std::size_t count) {
    if (count == 0) {
        return;
    }
    counts[key] += count;
    total += count;
}

void FrequencyDict::merge(const FrequencyDict& other) {
    for (const auto& [key, count] : other.counts) {
        add(key, count);
    }
}

FrequencyDict histogram(const MultiStream& ms, std::optional<IndexWindow> window) {
    const IndexWindow w = window.value_or(IndexWindow{0, ms.size()});
    if (w.first > ms.size() || w.count > ms.size() - w.first) {
        fail(ErrorCode::InvalidWindow, "window [" + std::to_string(w.first) + ", " +
                                           std::to_string(w.first + w.count) + ") exceeds " +
                                           std::to_string(ms.size()) + " samples");
    }
    FrequencyDict fd;
    std::string key;
    for (std::size_t j = w.first; j < w.first + w.count; ++j) {
        key.assign(ms.tuple(j));
        fd.add(key);
    }
    return fd;
}

std::vector<std::pair<std::string, std::size_t>> frequency_dictionary(const FrequencyDict& fd) {
    std::vector<std::pair<std::string, std::size_t>> out(fd.counts.begin(), fd.counts.end());
    // Map order is already ascending by key, so a stable sort by count settles ties.
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

FrequencyDict exclude_symbols(const FrequencyDict& fd, const std::set<std::string>& keys) {
    FrequencyDict out;
    for (const auto& [key, count] : fd.counts) {
        if (!keys.contains(key)) {
            out.add(key, count);
        }
    }
    return out;
}

double compare_histograms(const FrequencyDict& a, const FrequencyDict& b, Measure measure) {
    if (measure == Measure::L1) {
        const double ta = a.total ? static_cast<double>(a.total) : 1.0;
        const double tb = b.total ? static_cast<double>(b.total) : 1.0;
        double sum = 0.0;
        auto ia = a.counts.begin();
        auto ib = b.counts.begin();
        while (ia != a.counts.end() || ib != b.counts.end()) {
            if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
                sum += static_cast<double>(ia->second) / ta;
                ++ia;
            } else if (ia == a.counts.end() || ib->first < ia->first) {
                sum += static_cast<double>(ib->second) / tb;
                ++ib;
            } else {
                sum += std::fabs(static_cast<double>(ia->second) / ta - static_cast<double>(ib->second) / tb);
                ++ia;
                ++ib;
            }
        }
        return sum;
    }

    if (a.empty() && b.empty()) {
        fail(ErrorCode::BothEmpty, "cosine similarity of two empty histograms is undefined");
    }
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [key, count] : a.counts) {
        const double x = static_cast<double>(count);
        na += x * x;
        if (const auto it = b.counts.find(key); it != b.counts.end()) {
            dot += x * static_cast<double>(it->second);
        }
    }
    for (const auto& [key, count] : b.counts) {
        const double x = static_cast<double>(count);
        nb += x * x;
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

bool better_score(double a, double b, Measure measure) noexcept {
    return measure == Measure::L1 ? a < b : a > b;
}

Classification classify_operation(const FrequencyDict& window, const std::map<std::string, FrequencyDict>& references,
                                  Measure measure, const std::set<std::string>& excluded) {
    if (references.empty()) {
        fail(ErrorCode::NoReferences, "classification needs at least one reference histogram");
    }
    const FrequencyDict w = exclude_symbols(window, excluded);
    std::optional<Classification> best;
    for (const auto& [label, ref] : references) {
        const double score = compare_histograms(w, exclude_symbols(ref, excluded), measure);
        if (!best || better_score(score, best->score, measure)) {
            best = Classification{label, score};
        }
    }
    return *best;
}

}  // namespace symts
