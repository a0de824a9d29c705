#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symts/alphabet.hpp"
#include "symts/scla.hpp"

namespace symts {

namespace detail {
struct CompiledPattern;
}

/// Half-open sample range [start, end).
struct Match {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Match&) const = default;
};

/// Compiled regular expression over single-character symbols. Immutable and
/// safe to share between threads.
///
/// Grammar: literals, `.`, concatenation, `|`, `( )`, `*`, `+`, `?`,
/// `{m}`, `{m,}`, `{m,n}`. A backslash makes the next character literal.
class SymbolPattern {
public:
    const std::string& source() const noexcept;
    const Alphabet& alphabet() const noexcept;
    /// Automaton size (states of the forward program).
    std::size_t state_count() const noexcept;

private:
    friend SymbolPattern compile_pattern(std::string_view, const Alphabet&);
    friend const detail::CompiledPattern& compiled(const SymbolPattern&);
    explicit SymbolPattern(std::shared_ptr<const detail::CompiledPattern> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const detail::CompiledPattern> impl_;
};

/// Throws SyntaxError (with the character position), UnknownSymbol or PatternTooLarge.
SymbolPattern compile_pattern(std::string_view text, const Alphabet& alphabet);

/// Leftmost, longest, non-overlapping, nonempty matches; scanning resumes at
/// each match end. Runs in O(states * length). Throws AlphabetMismatch.
std::vector<Match> find_all(const SymbolPattern& pattern, std::string_view symbols);
inline std::vector<Match> find_all(const SymbolPattern& pattern, const SymbolStream& stream) {
    return find_all(pattern, std::string_view(stream.symbols));
}

/// Same result as find_all on the decompressed stream. Long runs are
/// skipped in constant time once the automaton state along the run becomes
/// stationary. Throws MalformedTokens, AlphabetMismatch.
std::vector<Match> find_all_tokens(const SymbolPattern& pattern, std::span<const Token> tokens);

/// Whole-string acceptance.
bool full_match(const SymbolPattern& pattern, std::string_view symbols);

}  // namespace symts
