#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "symts/alphabet.hpp"
#include "symts/pattern.hpp"

namespace symts::detail {

inline constexpr int kUnbounded = -1;
inline constexpr int kMaxRepeatCount = 1000;
inline constexpr std::size_t kMaxStates = 250000;
inline constexpr int kMaxNesting = 500;

struct Node {
    enum class Kind { Empty, Literal, Any, Concat, Alternation, Repeat };

    Kind kind = Kind::Empty;
    char symbol = 0;
    int min = 0;
    int max = 0;  // kUnbounded for no upper limit
    std::vector<Node> children;
};

/// Parses pattern text. Literals must be emitted by the alphabet.
Node parse_pattern(std::string_view text, const Alphabet& alphabet);

/// Same language read right to left.
Node reversed(const Node& node);

/// Instruction count of the compiled program, saturating at kMaxStates + 1.
std::size_t program_size(const Node& node);

struct Inst {
    enum class Op { Symbol, Any, Split, Jump, Match };

    Op op = Op::Match;
    char symbol = 0;
    int x = 0;  // Split/Jump target; Symbol/Any continue at pc + 1
    int y = 0;  // second Split target
};

struct Program {
    std::vector<Inst> code;
    int start = 0;
};

/// Thompson construction. Throws PatternTooLarge.
Program compile_program(const Node& node);

struct CompiledPattern {
    std::string source;
    Alphabet alphabet;
    Program forward;
    Program backward;  // program of the reversed pattern
};

}  // namespace symts::detail

namespace symts {
const detail::CompiledPattern& compiled(const SymbolPattern& pattern);
}
