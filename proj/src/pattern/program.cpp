#include <string>

#include "pattern_impl.hpp"
#include "symts/error.hpp"

namespace symts::detail {

namespace {

class Emitter {
public:
    explicit Emitter(std::vector<Inst>& code) : code_(code) {}

    void emit(const Node& node) {
        switch (node.kind) {
            case Node::Kind::Empty:
                return;
            case Node::Kind::Literal:
                code_.push_back({Inst::Op::Symbol, node.symbol, 0, 0});
                return;
            case Node::Kind::Any:
                code_.push_back({Inst::Op::Any, 0, 0, 0});
                return;
            case Node::Kind::Concat:
                for (const auto& child : node.children) {
                    emit(child);
                }
                return;
            case Node::Kind::Alternation:
                alternation(node);
                return;
            case Node::Kind::Repeat:
                repeat(node);
                return;
        }
    }

private:
    int here() const { return static_cast<int>(code_.size()); }

    void alternation(const Node& node) {
        std::vector<int> jumps;
        for (std::size_t i = 0; i + 1 < node.children.size(); ++i) {
            const int split = here();
            code_.push_back({Inst::Op::Split, 0, split + 1, 0});
            emit(node.children[i]);
            jumps.push_back(here());
            code_.push_back({Inst::Op::Jump, 0, 0, 0});
            code_[split].y = here();
        }
        emit(node.children.back());
        for (int j : jumps) {
            code_[j].x = here();
        }
    }

    void repeat(const Node& node) {
        const Node& body = node.children.front();
        for (int i = 0; i < node.min; ++i) {
            emit(body);
        }
        if (node.max == kUnbounded) {
            const int loop = here();
            code_.push_back({Inst::Op::Split, 0, loop + 1, 0});
            emit(body);
            code_.push_back({Inst::Op::Jump, 0, loop, 0});
            code_[loop].y = here();
            return;
        }
        // Optional copies, each one guarded by a split to the common exit.
        std::vector<int> splits;
        for (int i = node.min; i < node.max; ++i) {
            splits.push_back(here());
            code_.push_back({Inst::Op::Split, 0, here() + 1, 0});
            emit(body);
        }
        for (int s : splits) {
            code_[s].y = here();
        }
    }

    std::vector<Inst>& code_;
};

}  // namespace

Program compile_program(const Node& node) {
    const std::size_t size = program_size(node);
    if (size > kMaxStates) {
        fail(ErrorCode::PatternTooLarge, "pattern expands to more than " + std::to_string(kMaxStates) + " states");
    }
    Program program;
    program.code.reserve(size);
    Emitter(program.code).emit(node);
    program.code.push_back({Inst::Op::Match, 0, 0, 0});
    program.start = 0;
    return program;
}

}  // namespace symts::detail
