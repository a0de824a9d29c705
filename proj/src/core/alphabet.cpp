#include "symts/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symts/error.hpp"

namespace symts {

namespace {

bool valid_symbol(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u > 0x20 && u < 0x7f && c != ',' && c != '"';
}

std::string quoted(char c) { return std::string("'") + c + "'"; }

}  // namespace

Alphabet::Alphabet(std::string symbols, std::vector<double> boundaries, std::optional<ValueRange> range,
                   std::optional<char> catch_all, NanPolicy nan_policy, char gap_symbol)
    : symbols_(std::move(symbols)),
      boundaries_(std::move(boundaries)),
      range_(range),
      catch_all_(catch_all),
      nan_policy_(nan_policy),
      gap_symbol_(gap_symbol) {
    if (symbols_.empty()) {
        fail(ErrorCode::InvalidAlphabet, "alphabet needs at least one symbol");
    }
    if (boundaries_.size() + 1 != symbols_.size()) {
        fail(ErrorCode::InvalidAlphabet, std::to_string(symbols_.size()) + " symbols need " +
                                             std::to_string(symbols_.size() - 1) + " boundaries, got " +
                                             std::to_string(boundaries_.size()));
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!valid_symbol(symbols_[i])) {
            fail(ErrorCode::InvalidAlphabet, "symbol " + quoted(symbols_[i]) + " is not a printable non-comma character");
        }
        if (symbols_.find(symbols_[i], i + 1) != std::string::npos) {
            fail(ErrorCode::InvalidAlphabet, "symbol " + quoted(symbols_[i]) + " appears twice");
        }
    }
    for (std::size_t i = 0; i < boundaries_.size(); ++i) {
        if (!std::isfinite(boundaries_[i])) {
            fail(ErrorCode::InvalidAlphabet, "boundary " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(boundaries_[i] > boundaries_[i - 1])) {
            fail(ErrorCode::InvalidAlphabet, "boundaries must be strictly increasing");
        }
    }
    if (range_) {
        if (!std::isfinite(range_->low) || !std::isfinite(range_->high) || !(range_->low < range_->high)) {
            fail(ErrorCode::InvalidAlphabet, "explicit range must satisfy low < high");
        }
        if (!boundaries_.empty() && (boundaries_.front() <= range_->low || boundaries_.back() >= range_->high)) {
            fail(ErrorCode::InvalidAlphabet, "boundaries must lie strictly inside the explicit range");
        }
    } else if (catch_all_) {
        fail(ErrorCode::InvalidAlphabet, "a catch-all symbol requires an explicit range");
    }
    if (catch_all_ && (!valid_symbol(*catch_all_) || symbols_.find(*catch_all_) != std::string::npos)) {
        fail(ErrorCode::InvalidAlphabet, "catch-all symbol " + quoted(*catch_all_) + " must be new and printable");
    }
    if (nan_policy_ == NanPolicy::Gap) {
        if (!valid_symbol(gap_symbol_) || symbols_.find(gap_symbol_) != std::string::npos ||
            (catch_all_ && *catch_all_ == gap_symbol_)) {
            fail(ErrorCode::InvalidAlphabet, "gap symbol " + quoted(gap_symbol_) + " must be new and printable");
        }
    }
}

Alphabet Alphabet::with_nan_policy(NanPolicy policy, char gap_symbol) const {
    return Alphabet(symbols_, boundaries_, range_, catch_all_, policy, gap_symbol);
}

char Alphabet::symbol_for(double value) const {
    if (std::isnan(value)) {
        if (nan_policy_ == NanPolicy::Gap) {
            return gap_symbol_;
        }
        fail(ErrorCode::NonFiniteSample, "sample is NaN");
    }
    if (range_ && (value < range_->low || value >= range_->high)) {
        if (catch_all_) {
            return *catch_all_;
        }
        fail(ErrorCode::OutOfRange, "value " + std::to_string(value) + " is outside [" + std::to_string(range_->low) +
                                        ", " + std::to_string(range_->high) + ")");
    }
    const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), value);
    return symbols_[static_cast<std::size_t>(it - boundaries_.begin())];
}

std::string Alphabet::emitted_symbols() const {
    std::string out = symbols_;
    if (catch_all_) {
        out.push_back(*catch_all_);
    }
    if (nan_policy_ == NanPolicy::Gap) {
        out.push_back(gap_symbol_);
    }
    return out;
}

bool Alphabet::emits(char symbol) const noexcept {
    return symbols_.find(symbol) != std::string::npos || (catch_all_ && *catch_all_ == symbol) ||
           (nan_policy_ == NanPolicy::Gap && gap_symbol_ == symbol);
}

bool Alphabet::operator==(const Alphabet& other) const {
    const bool same_range = range_.has_value() == other.range_.has_value() &&
                            (!range_ || (range_->low == other.range_->low && range_->high == other.range_->high));
    return symbols_ == other.symbols_ && boundaries_ == other.boundaries_ && same_range &&
           catch_all_ == other.catch_all_ && nan_policy_ == other.nan_policy_ &&
           (nan_policy_ == NanPolicy::Reject || gap_symbol_ == other.gap_symbol_);
}

Alphabet usd_alphabet(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        fail(ErrorCode::NonpositiveEpsilon, "epsilon must be finite and positive, got " + std::to_string(epsilon));
    }
    return Alphabet("dsu", {-epsilon, epsilon});
}

}  // namespace symts
