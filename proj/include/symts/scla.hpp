#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symts/alphabet.hpp"
#include "symts/grid.hpp"
#include "symts/streaming.hpp"

namespace symts {

/// Quantized signal, one symbol per sample.
struct SymbolStream {
    std::string symbols;
    std::optional<Grid> grid;  // sample times, when known

    std::size_t size() const noexcept { return symbols.size(); }
    bool operator==(const SymbolStream&) const = default;
};

/// Run of one symbol: `run_length` samples starting at `start_index`.
struct Token {
    char symbol = 0;
    std::size_t run_length = 0;
    std::size_t start_index = 0;

    bool operator==(const Token&) const = default;
};

/// Element-wise interval lookup. Throws OutOfRange or NonFiniteSample with the sample index.
SymbolStream quantize(std::span<const double> values, const Alphabet& alphabet,
                      std::optional<Grid> grid = std::nullopt);

/// Maximal runs of equal symbols.
std::vector<Token> compress_runs(std::string_view symbols);
inline std::vector<Token> compress_runs(const SymbolStream& stream) { return compress_runs(stream.symbols); }

/// Throws MalformedTokens unless the list starts at 0, has no gaps or empty
/// runs and no two adjacent tokens share a symbol.
void validate_tokens(std::span<const Token> tokens);

/// Inverse of compress_runs. Throws MalformedTokens.
SymbolStream decompress(std::span<const Token> tokens);

/// Incremental single-channel lexical analyser: optional local operator,
/// quantization and run-length compression. Tokens are emitted as soon as
/// their run is closed.
class ChannelLexer {
public:
    ChannelLexer(std::optional<LocalKernel> kernel, Alphabet alphabet, BoundaryMode mode = BoundaryMode::Valid);

    void push(double sample, std::vector<Token>& out);
    void finish(std::vector<Token>& out);

    /// Symbols produced so far (index space of the emitted tokens).
    std::size_t symbols_emitted() const noexcept { return emitted_; }

private:
    void consume(std::span<const double> values, std::vector<Token>& out);

    std::optional<StreamingFilter> filter_;
    Alphabet alphabet_;
    std::vector<double> scratch_;
    std::optional<Token> open_;
    std::size_t emitted_ = 0;
};

/// compress_runs(quantize(apply_streaming(kernel, raw), alphabet)); with no
/// kernel the operator stage is the identity.
std::vector<Token> run_scla(std::span<const double> raw, const std::optional<LocalKernel>& kernel,
                            const Alphabet& alphabet, BoundaryMode mode = BoundaryMode::Valid);

}  // namespace symts
