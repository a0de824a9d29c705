#include <algorithm>

#include "pattern_impl.hpp"

namespace symts::detail {

Node reversed(const Node& node) {
    Node out = node;
    for (auto& child : out.children) {
        child = reversed(child);
    }
    if (out.kind == Node::Kind::Concat) {
        std::reverse(out.children.begin(), out.children.end());
    }
    return out;
}

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) { return std::min(a + b, kMaxStates + 1); }

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > (kMaxStates + 1) / a) {
        return kMaxStates + 1;
    }
    return std::min(a * b, kMaxStates + 1);
}

std::size_t fragment_size(const Node& node) {
    switch (node.kind) {
        case Node::Kind::Empty:
            return 0;
        case Node::Kind::Literal:
        case Node::Kind::Any:
            return 1;
        case Node::Kind::Concat: {
            std::size_t total = 0;
            for (const auto& child : node.children) {
                total = saturating_add(total, fragment_size(child));
            }
            return total;
        }
        case Node::Kind::Alternation: {
            // One split and one jump per branch except the last.
            std::size_t total = 2 * (node.children.size() - 1);
            for (const auto& child : node.children) {
                total = saturating_add(total, fragment_size(child));
            }
            return total;
        }
        case Node::Kind::Repeat: {
            const std::size_t body = fragment_size(node.children.front());
            const auto min = static_cast<std::size_t>(node.min);
            if (node.max == kUnbounded) {
                return saturating_add(saturating_mul(min, body), body + 2);
            }
            const auto optional = static_cast<std::size_t>(node.max - node.min);
            return saturating_add(saturating_mul(min, body), saturating_mul(optional, body + 1));
        }
    }
    return 0;
}

}  // namespace

std::size_t program_size(const Node& node) { return saturating_add(fragment_size(node), 1); }

}  // namespace symts::detail
