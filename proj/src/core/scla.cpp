#include "symts/scla.hpp"

#include <string>
#include <utility>

#include "symts/error.hpp"

namespace symts {

SymbolStream quantize(std::span<const double> values, const Alphabet& alphabet, std::optional<Grid> grid) {
    SymbolStream stream;
    stream.grid = grid;
    stream.symbols.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        try {
            stream.symbols[i] = alphabet.symbol_for(values[i]);
        } catch (const Error& e) {
            fail(e.code(), "sample " + std::to_string(i) + ": " + e.detail());
        }
    }
    return stream;
}

std::vector<Token> compress_runs(std::string_view symbols) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < symbols.size()) {
        std::size_t j = i + 1;
        while (j < symbols.size() && symbols[j] == symbols[i]) {
            ++j;
        }
        tokens.push_back(Token{symbols[i], j - i, i});
        i = j;
    }
    return tokens;
}

void validate_tokens(std::span<const Token> tokens) {
    std::size_t expected = 0;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
        const auto& t = tokens[j];
        if (t.run_length == 0) {
            fail(ErrorCode::MalformedTokens, "token " + std::to_string(j) + " has an empty run");
        }
        if (t.start_index != expected) {
            fail(ErrorCode::MalformedTokens, "token " + std::to_string(j) + " starts at " +
                                                 std::to_string(t.start_index) + ", expected " +
                                                 std::to_string(expected));
        }
        if (j > 0 && tokens[j - 1].symbol == t.symbol) {
            fail(ErrorCode::MalformedTokens,
                 "tokens " + std::to_string(j - 1) + " and " + std::to_string(j) + " share symbol '" + t.symbol + "'");
        }
        expected += t.run_length;
    }
}

SymbolStream decompress(std::span<const Token> tokens) {
    validate_tokens(tokens);
    SymbolStream stream;
    for (const auto& t : tokens) {
        stream.symbols.append(t.run_length, t.symbol);
    }
    return stream;
}

ChannelLexer::ChannelLexer(std::optional<LocalKernel> kernel, Alphabet alphabet, BoundaryMode mode)
    : alphabet_(std::move(alphabet)) {
    if (kernel) {
        filter_.emplace(std::move(*kernel), mode);
    }
}

void ChannelLexer::consume(std::span<const double> values, std::vector<Token>& out) {
    for (double v : values) {
        char symbol = 0;
        try {
            symbol = alphabet_.symbol_for(v);
        } catch (const Error& e) {
            fail(e.code(), "symbol " + std::to_string(emitted_) + ": " + e.detail());
        }
        if (open_ && open_->symbol == symbol) {
            ++open_->run_length;
        } else {
            if (open_) {
                out.push_back(*open_);
            }
            open_ = Token{symbol, 1, emitted_};
        }
        ++emitted_;
    }
}

void ChannelLexer::push(double sample, std::vector<Token>& out) {
    if (!filter_) {
        consume(std::span<const double>(&sample, 1), out);
        return;
    }
    scratch_.clear();
    filter_->push(sample, scratch_);
    consume(scratch_, out);
}

void ChannelLexer::finish(std::vector<Token>& out) {
    if (filter_) {
        scratch_.clear();
        filter_->finish(scratch_);
        consume(scratch_, out);
    }
    if (open_) {
        out.push_back(*open_);
        open_.reset();
    }
}

std::vector<Token> run_scla(std::span<const double> raw, const std::optional<LocalKernel>& kernel,
                            const Alphabet& alphabet, BoundaryMode mode) {
    ChannelLexer lexer(kernel, alphabet, mode);
    std::vector<Token> tokens;
    for (double v : raw) {
        lexer.push(v, tokens);
    }
    lexer.finish(tokens);
    return tokens;
}

}  // namespace symts
