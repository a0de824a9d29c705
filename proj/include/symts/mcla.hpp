#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symts/grid.hpp"
#include "symts/scla.hpp"

namespace symts {

/// Sample-aligned tuple symbols. Tuple j occupies symbols[j*arity, (j+1)*arity).
class MultiStream {
public:
    MultiStream(std::vector<std::string> channels, std::string symbols, double start, double step);

    const std::vector<std::string>& channels() const noexcept { return channels_; }
    std::size_t arity() const noexcept { return channels_.size(); }
    std::size_t size() const noexcept { return symbols_.size() / channels_.size(); }
    const std::string& flat() const noexcept { return symbols_; }
    std::string_view tuple(std::size_t j) const;
    /// Symbols of one channel, in sample order.
    std::string channel(std::size_t i) const;

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    double time(std::size_t j) const noexcept { return start_ + static_cast<double>(j) * step_; }

    bool operator==(const MultiStream&) const = default;

private:
    std::vector<std::string> channels_;
    std::string symbols_;
    double start_;
    double step_;
};

/// Resamples every stream onto the coarsest grid by carrying the last
/// observed symbol forward, restricted to the common time range. Channel
/// names default to "0", "1", ... Throws EmptyInput, NoOverlap, LengthMismatch.
MultiStream align_and_combine(std::span<const SymbolStream> streams, std::span<const Grid> grids,
                              std::vector<std::string> names = {});

struct FrequencyDict {
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;

    void add(const std::string& key, std::size_t count = 1);
    /// Key-wise sum.
    void merge(const FrequencyDict& other);
    bool empty() const noexcept { return total == 0; }
    bool operator==(const FrequencyDict&) const = default;
};

struct IndexWindow {
    std::size_t first = 0;
    std::size_t count = 0;
};

/// Per-sample tuple counts over the window (whole stream by default). Throws InvalidWindow.
FrequencyDict histogram(const MultiStream& ms, std::optional<IndexWindow> window = std::nullopt);

/// Entries by decreasing count, ties by ascending key.
std::vector<std::pair<std::string, std::size_t>> frequency_dictionary(const FrequencyDict& fd);

FrequencyDict exclude_symbols(const FrequencyDict& fd, const std::set<std::string>& keys);

enum class Measure { L1, Cosine };

/// l1: sum of |p_a - p_b| over normalized frequencies, in [0, 2]; an empty
/// dict has all frequencies zero. cosine: in [0, 1], zero when exactly one
/// dict is empty. Throws BothEmpty for cosine on two empty dicts.
double compare_histograms(const FrequencyDict& a, const FrequencyDict& b, Measure measure);

/// True when score a ranks strictly better than b under the measure.
bool better_score(double a, double b, Measure measure) noexcept;

struct Classification {
    std::string label;
    double score = 0.0;
};

/// Best reference after excluding keys from both sides; ties go to the
/// lexicographically first label. Throws NoReferences.
Classification classify_operation(const FrequencyDict& window, const std::map<std::string, FrequencyDict>& references,
                                  Measure measure, const std::set<std::string>& excluded = {});

}  // namespace symts
