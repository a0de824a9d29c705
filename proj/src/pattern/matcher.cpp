#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pattern_impl.hpp"
#include "symts/error.hpp"

namespace symts {

using detail::Inst;
using detail::Program;

const detail::CompiledPattern& compiled(const SymbolPattern& pattern) { return *pattern.impl_; }

const std::string& SymbolPattern::source() const noexcept { return impl_->source; }
const Alphabet& SymbolPattern::alphabet() const noexcept { return impl_->alphabet; }
std::size_t SymbolPattern::state_count() const noexcept { return impl_->forward.code.size(); }

SymbolPattern compile_pattern(std::string_view text, const Alphabet& alphabet) {
    const detail::Node ast = detail::parse_pattern(text, alphabet);
    auto impl = std::make_shared<detail::CompiledPattern>(detail::CompiledPattern{
        std::string(text), alphabet, detail::compile_program(ast), detail::compile_program(detail::reversed(ast))});
    return SymbolPattern(std::move(impl));
}

namespace {

// Thread of the reversed automaton: program counter plus the furthest
// sample end from which some injected thread reached it.
struct Thread {
    int pc;
    long end;
};

using ThreadList = std::vector<Thread>;

class Simulator {
public:
    explicit Simulator(const Program& program) : program_(program), mark_(program.code.size(), 0) {}

    // Appends the epsilon closure of pc, skipping states already on the list.
    void closure(ThreadList& list, int pc, long end) {
        stack_.push_back(pc);
        while (!stack_.empty()) {
            const int at = stack_.back();
            stack_.pop_back();
            if (mark_[at] == generation_) {
                continue;
            }
            mark_[at] = generation_;
            const Inst& inst = program_.code[at];
            switch (inst.op) {
                case Inst::Op::Split:
                    stack_.push_back(inst.y);
                    stack_.push_back(inst.x);
                    break;
                case Inst::Op::Jump:
                    stack_.push_back(inst.x);
                    break;
                default:
                    list.push_back({at, end});
                    break;
            }
        }
    }

    ThreadList start(long end) {
        ++generation_;
        ThreadList list;
        closure(list, program_.start, end);
        return list;
    }

    // Consumes one symbol. The input list is ordered by non-increasing end,
    // so the first thread to reach a state carries its largest end; the
    // thread injected at `inject` comes last with the smallest end.
    void step(const ThreadList& in, char symbol, std::optional<long> inject, ThreadList& out) {
        ++generation_;
        out.clear();
        for (const Thread& t : in) {
            const Inst& inst = program_.code[t.pc];
            if (inst.op == Inst::Op::Any || (inst.op == Inst::Op::Symbol && inst.symbol == symbol)) {
                closure(out, t.pc + 1, t.end);
            }
        }
        if (inject) {
            closure(out, program_.start, *inject);
        }
    }

    long match_end(const ThreadList& list) const {
        for (const Thread& t : list) {
            if (program_.code[t.pc].op == Inst::Op::Match) {
                return t.end;
            }
        }
        return -1;
    }

private:
    const Program& program_;
    std::vector<std::uint64_t> mark_;
    std::uint64_t generation_ = 0;
    std::vector<int> stack_;
};

void check_symbols(const Alphabet& alphabet, std::string_view symbols) {
    std::array<bool, 256> allowed{};
    for (char c : alphabet.emitted_symbols()) {
        allowed[static_cast<unsigned char>(c)] = true;
    }
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (!allowed[static_cast<unsigned char>(symbols[i])]) {
            fail(ErrorCode::AlphabetMismatch,
                 "symbol '" + std::string(1, symbols[i]) + "' at index " + std::to_string(i) + " is not in the alphabet");
        }
    }
}

// Longest-match end for every start position over a range of positions:
// None (no nonempty match), Const (end fixed) or Offset (end = start + value).
struct Segment {
    enum class Kind { None, Const, Offset };

    std::size_t begin;
    std::size_t end;
    Kind kind;
    long value;
};

std::vector<Match> greedy_scan(const std::vector<Segment>& segments, std::size_t n) {
    std::vector<Match> matches;
    std::size_t p = 0;
    std::size_t k = 0;
    while (p < n) {
        while (segments[k].end <= p) {
            ++k;
        }
        const Segment& seg = segments[k];
        switch (seg.kind) {
            case Segment::Kind::None:
                p = seg.end;
                break;
            case Segment::Kind::Const:
                if (seg.value > static_cast<long>(p)) {
                    matches.push_back({p, static_cast<std::size_t>(seg.value)});
                    p = static_cast<std::size_t>(seg.value);
                } else {
                    ++p;
                }
                break;
            case Segment::Kind::Offset:
                if (seg.value <= 0) {
                    p = seg.end;
                    break;
                }
                while (p < seg.end) {
                    matches.push_back({p, p + static_cast<std::size_t>(seg.value)});
                    p += static_cast<std::size_t>(seg.value);
                }
                break;
        }
    }
    return matches;
}

Segment point(std::size_t i, long end) {
    if (end > static_cast<long>(i)) {
        return {i, i + 1, Segment::Kind::Const, end};
    }
    return {i, i + 1, Segment::Kind::None, -1};
}

}  // namespace

std::vector<Match> find_all(const SymbolPattern& pattern, std::string_view symbols) {
    const auto& impl = compiled(pattern);
    check_symbols(impl.alphabet, symbols);
    const std::size_t n = symbols.size();
    Simulator sim(impl.backward);
    ThreadList cur = sim.start(static_cast<long>(n));
    ThreadList next;
    std::vector<Segment> segments(n);
    for (std::size_t i = n; i-- > 0;) {
        sim.step(cur, symbols[i], static_cast<long>(i), next);
        std::swap(cur, next);
        segments[i] = point(i, sim.match_end(cur));
    }
    return greedy_scan(segments, n);
}

namespace {

bool same_states(const ThreadList& a, const ThreadList& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].pc != b[j].pc) {
            return false;
        }
    }
    return true;
}

// Along a run the thread list is stationary once three consecutive lists
// share their states and every end either stays fixed or moves with the
// position, the same way in both transitions. From then on each step maps
// the list onto itself with the same per-thread behaviour.
bool stationary(const ThreadList& cur, const ThreadList& prev1, const ThreadList& prev2) {
    if (!same_states(cur, prev1) || !same_states(prev1, prev2)) {
        return false;
    }
    for (std::size_t j = 0; j < cur.size(); ++j) {
        const long d1 = prev1[j].end - cur[j].end;
        const long d2 = prev2[j].end - prev1[j].end;
        if (d1 != d2 || (d1 != 0 && d1 != 1)) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<Match> find_all_tokens(const SymbolPattern& pattern, std::span<const Token> tokens) {
    validate_tokens(tokens);
    const auto& impl = compiled(pattern);
    std::string run_symbols;
    for (const auto& t : tokens) {
        run_symbols.push_back(t.symbol);
    }
    check_symbols(impl.alphabet, run_symbols);

    const std::size_t n = tokens.empty() ? 0 : tokens.back().start_index + tokens.back().run_length;
    Simulator sim(impl.backward);
    ThreadList cur = sim.start(static_cast<long>(n));
    ThreadList prev1;
    ThreadList prev2;
    ThreadList next;
    std::vector<Segment> segments;

    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
        const std::size_t a = it->start_index;
        const std::size_t b = a + it->run_length;
        std::size_t steps = 0;
        for (std::size_t i = b; i-- > a;) {
            sim.step(cur, it->symbol, static_cast<long>(i), next);
            std::swap(prev2, prev1);
            std::swap(prev1, cur);
            std::swap(cur, next);
            ++steps;
            const long end = sim.match_end(cur);
            segments.push_back(point(i, end));

            if (steps < 2 || i == a || !stationary(cur, prev1, prev2)) {
                continue;
            }
            // Jump to the run start: fixed ends stay, moving ends shift by the distance.
            const long shift = static_cast<long>(i - a);
            Segment rest{a, i, Segment::Kind::None, -1};
            for (std::size_t j = 0; j < cur.size(); ++j) {
                const bool moving = prev1[j].end != cur[j].end;
                if (impl.backward.code[cur[j].pc].op == Inst::Op::Match) {
                    rest.kind = moving ? Segment::Kind::Offset : Segment::Kind::Const;
                    rest.value = moving ? cur[j].end - static_cast<long>(i) : cur[j].end;
                }
                if (moving) {
                    cur[j].end -= shift;
                }
            }
            segments.push_back(rest);
            break;
        }
    }
    std::reverse(segments.begin(), segments.end());
    return greedy_scan(segments, n);
}

bool full_match(const SymbolPattern& pattern, std::string_view symbols) {
    const auto& impl = compiled(pattern);
    Simulator sim(impl.forward);
    ThreadList cur = sim.start(0);
    ThreadList next;
    for (char c : symbols) {
        sim.step(cur, c, std::nullopt, next);
        std::swap(cur, next);
        if (cur.empty()) {
            return false;
        }
    }
    return sim.match_end(cur) >= 0;
}

}  // namespace symts
