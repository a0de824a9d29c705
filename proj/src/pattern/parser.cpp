#include <string>

#include "pattern_impl.hpp"
#include "symts/error.hpp"

namespace symts::detail {

namespace {

class Parser {
public:
    Parser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

    Node parse() {
        Node node = alternation();
        if (pos_ < text_.size()) {
            syntax_error("unmatched ')'");
        }
        return node;
    }

private:
    [[noreturn]] void syntax_error(const std::string& message) const {
        fail(ErrorCode::SyntaxError, "position " + std::to_string(pos_) + ": " + message);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    Node alternation() {
        Node first = concatenation();
        if (at_end() || peek() != '|') {
            return first;
        }
        Node alt;
        alt.kind = Node::Kind::Alternation;
        alt.children.push_back(std::move(first));
        while (!at_end() && peek() == '|') {
            ++pos_;
            alt.children.push_back(concatenation());
        }
        return alt;
    }

    Node concatenation() {
        Node cat;
        cat.kind = Node::Kind::Concat;
        while (!at_end() && peek() != '|' && peek() != ')') {
            cat.children.push_back(repetition());
        }
        if (cat.children.empty()) {
            return Node{};
        }
        if (cat.children.size() == 1) {
            return std::move(cat.children.front());
        }
        return cat;
    }

    Node repetition() {
        Node node = atom();
        while (!at_end()) {
            const char c = peek();
            int min = 0;
            int max = 0;
            if (c == '*') {
                min = 0;
                max = kUnbounded;
                ++pos_;
            } else if (c == '+') {
                min = 1;
                max = kUnbounded;
                ++pos_;
            } else if (c == '?') {
                min = 0;
                max = 1;
                ++pos_;
            } else if (c == '{') {
                counted(min, max);
            } else {
                break;
            }
            Node rep;
            rep.kind = Node::Kind::Repeat;
            rep.min = min;
            rep.max = max;
            rep.children.push_back(std::move(node));
            node = std::move(rep);
        }
        return node;
    }

    int number() {
        const std::size_t begin = pos_;
        long value = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + (peek() - '0');
            if (value > kMaxRepeatCount) {
                pos_ = begin;
                syntax_error("repetition count exceeds " + std::to_string(kMaxRepeatCount));
            }
            ++pos_;
        }
        if (pos_ == begin) {
            syntax_error("expected a repetition count");
        }
        return static_cast<int>(value);
    }

    void counted(int& min, int& max) {
        const std::size_t open = pos_;
        ++pos_;
        min = number();
        if (!at_end() && peek() == '}') {
            max = min;
        } else if (!at_end() && peek() == ',') {
            ++pos_;
            if (!at_end() && peek() == '}') {
                max = kUnbounded;
            } else {
                max = number();
            }
        }
        if (at_end() || peek() != '}') {
            syntax_error("unterminated counted repetition");
        }
        ++pos_;
        if (max != kUnbounded && max < min) {
            pos_ = open;
            syntax_error("repetition range {" + std::to_string(min) + "," + std::to_string(max) + "} is reversed");
        }
    }

    Node atom() {
        const char c = peek();
        if (c == '(') {
            if (++depth_ > kMaxNesting) {
                fail(ErrorCode::PatternTooLarge, "groups nest deeper than " + std::to_string(kMaxNesting));
            }
            ++pos_;
            Node inner = alternation();
            if (at_end()) {
                syntax_error("missing ')'");
            }
            ++pos_;
            --depth_;
            return inner;
        }
        if (c == '*' || c == '+' || c == '?' || c == '{') {
            syntax_error(std::string("nothing to repeat before '") + c + "'");
        }
        Node node;
        if (c == '.') {
            ++pos_;
            node.kind = Node::Kind::Any;
            return node;
        }
        char symbol = c;
        if (c == '\\') {
            ++pos_;
            if (at_end()) {
                syntax_error("dangling escape");
            }
            symbol = peek();
        }
        if (!alphabet_.emits(symbol)) {
            fail(ErrorCode::UnknownSymbol,
                 "position " + std::to_string(pos_) + ": symbol '" + symbol + "' is not in the alphabet");
        }
        ++pos_;
        node.kind = Node::Kind::Literal;
        node.symbol = symbol;
        return node;
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

Node parse_pattern(std::string_view text, const Alphabet& alphabet) { return Parser(text, alphabet).parse(); }

}  // namespace symts::detail
