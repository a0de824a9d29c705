#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symts {

enum class NanPolicy { Reject, Gap };

/// Explicit value range [low, high); values outside map to the catch-all
/// symbol, or are rejected when there is none.
struct ValueRange {
    double low;
    double high;
};

/// Ordered partition of the value axis into half-open intervals [lo, hi),
/// one single-character symbol per interval. The first interval extends to
/// -inf and the last to +inf unless an explicit range is configured.
class Alphabet {
public:
    /// Throws InvalidAlphabet when boundaries are not strictly increasing and
    /// finite, their count is not symbols.size() - 1, or symbols repeat.
    Alphabet(std::string symbols, std::vector<double> boundaries, std::optional<ValueRange> range = std::nullopt,
             std::optional<char> catch_all = std::nullopt, NanPolicy nan_policy = NanPolicy::Reject,
             char gap_symbol = '_');

    const std::string& symbols() const noexcept { return symbols_; }
    const std::vector<double>& boundaries() const noexcept { return boundaries_; }
    const std::optional<ValueRange>& range() const noexcept { return range_; }
    const std::optional<char>& catch_all() const noexcept { return catch_all_; }
    NanPolicy nan_policy() const noexcept { return nan_policy_; }
    char gap_symbol() const noexcept { return gap_symbol_; }

    Alphabet with_nan_policy(NanPolicy policy, char gap_symbol = '_') const;

    /// Symbol of one value. Throws OutOfRange or NonFiniteSample.
    char symbol_for(double value) const;
    /// Every symbol that may appear in a quantized stream (including the
    /// catch-all and gap symbols when enabled).
    std::string emitted_symbols() const;
    bool emits(char symbol) const noexcept;

    bool operator==(const Alphabet&) const;

private:
    std::string symbols_;
    std::vector<double> boundaries_;
    std::optional<ValueRange> range_;
    std::optional<char> catch_all_;
    NanPolicy nan_policy_;
    char gap_symbol_;
};

/// Direction alphabet for derivative channels: d on (-inf, -eps), s on
/// [-eps, eps), u on [eps, inf). Throws NonpositiveEpsilon.
Alphabet usd_alphabet(double epsilon);

}  // namespace symts
