#include <doctest.h>

#include <chrono>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "support/errors.hpp"
#include "support/regex_oracle.hpp"
#include "symts/alphabet.hpp"
#include "symts/pattern.hpp"
#include "symts/scla.hpp"

using namespace symts;
using testing::code_of;

namespace {

const Alphabet& usd() {
    static const Alphabet a = usd_alphabet(0.1);
    return a;
}

std::vector<Match> via_tokens(const SymbolPattern& p, const std::string& s) {
    return find_all_tokens(p, compress_runs(s));
}

void check_sane(const SymbolPattern& p, const std::string& s, const std::vector<Match>& ms) {
    std::size_t last = 0;
    for (const auto& m : ms) {
        CHECK(m.start >= last);
        CHECK(m.start < m.end);
        CHECK(m.end <= s.size());
        CHECK(full_match(p, s.substr(m.start, m.end - m.start)));
        last = m.end;
    }
}

}  // namespace

TEST_CASE("compilation examples") {
    CHECK_NOTHROW(compile_pattern("u+d+", usd()));
    CHECK_NOTHROW(compile_pattern("u{3,}s*d", usd()));
    CHECK_NOTHROW(compile_pattern("(u|d)?.{2}s{0,3}", usd()));
    const SymbolPattern p = compile_pattern("u+d+", usd());
    CHECK(p.source() == "u+d+");
    CHECK(p.alphabet() == usd());
    CHECK(p.state_count() > 0);
}

TEST_CASE("syntax errors carry a position") {
    for (const char* bad : {"u{5,2}", "u)", "(u", "*u", "u|*", "u{", "u{2", "u{x}", "u{1,x}", "u\\", "u{1001}",
                            "u{2,1001}", "((u)"}) {
        CAPTURE(bad);
        try {
            compile_pattern(bad, usd());
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SyntaxError);
            CHECK(e.detail().rfind("position ", 0) == 0);
        }
    }
    CHECK(code_of([] { compile_pattern("ux", usd()); }) == ErrorCode::UnknownSymbol);
    CHECK(code_of([] { compile_pattern("\\_", usd()); }) == ErrorCode::UnknownSymbol);
    CHECK_NOTHROW(compile_pattern("u_", usd().with_nan_policy(NanPolicy::Gap)));
}

TEST_CASE("oversized patterns are rejected") {
    CHECK(code_of([] { compile_pattern(std::string(600, '(') + "u" + std::string(600, ')'), usd()); }) ==
          ErrorCode::PatternTooLarge);
    CHECK(code_of([] { compile_pattern("((u{1000}){1000}){1000}", usd()); }) == ErrorCode::PatternTooLarge);
}

TEST_CASE("matching examples") {
    const SymbolPattern ud = compile_pattern("ud", usd());
    CHECK(find_all(ud, "uudud") == std::vector<Match>{{1, 3}, {3, 5}});
    const SymbolPattern s_star = compile_pattern("s*", usd());
    CHECK(find_all(s_star, "ussudsss") == std::vector<Match>{{1, 3}, {5, 8}});
    CHECK(find_all(s_star, "").empty());
    const SymbolPattern u3 = compile_pattern("u{3}", usd());
    CHECK(find_all_tokens(u3, std::vector<Token>{{'u', 5, 0}}) == std::vector<Match>{{0, 3}});
    CHECK(find_all(u3, "uuuuuuu") == std::vector<Match>{{0, 3}, {3, 6}});
    const SymbolPattern d = compile_pattern("d", usd());
    CHECK(find_all_tokens(d, std::vector<Token>{{'u', 4, 0}, {'s', 2, 4}}).empty());
    // Longest match at the leftmost start, not the first alternative.
    const SymbolPattern alt = compile_pattern("u|uu|uud", usd());
    CHECK(find_all(alt, "uudu") == std::vector<Match>{{0, 3}, {3, 4}});
    CHECK(find_all(compile_pattern("u+d+", usd()), SymbolStream{"suuddsud", std::nullopt}) ==
          std::vector<Match>{{1, 5}, {6, 8}});
    CHECK(full_match(compile_pattern("u{3,}s*d", usd()), "uuuud"));
    CHECK(!full_match(compile_pattern("u{3,}s*d", usd()), "uud"));
}

TEST_CASE("matching errors") {
    const SymbolPattern p = compile_pattern("u", usd());
    CHECK(code_of([&] { find_all(p, "uxu"); }) == ErrorCode::AlphabetMismatch);
    CHECK(code_of([&] { find_all_tokens(p, std::vector<Token>{{'x', 1, 0}}); }) == ErrorCode::AlphabetMismatch);
    CHECK(code_of([&] { find_all_tokens(p, std::vector<Token>{{'u', 1, 0}, {'u', 1, 1}}); }) ==
          ErrorCode::MalformedTokens);
    CHECK(code_of([&] { find_all_tokens(p, std::vector<Token>{{'u', 1, 2}}); }) == ErrorCode::MalformedTokens);
}

TEST_CASE("escapes and wildcards") {
    const Alphabet odd("a.|", {0.0, 1.0});
    const SymbolPattern dot = compile_pattern("\\.", odd);
    CHECK(find_all(dot, "a.|.") == std::vector<Match>{{1, 2}, {3, 4}});
    const SymbolPattern bar = compile_pattern("a\\|", odd);
    CHECK(find_all(bar, "a|a.") == std::vector<Match>{{0, 2}});
    const SymbolPattern any = compile_pattern("a.", odd);
    CHECK(find_all(any, "a|a.aa") == std::vector<Match>{{0, 2}, {2, 4}, {4, 6}});
}

TEST_CASE("exhaustive small patterns agree with the backtracking oracle") {
    const auto strings = oracle::all_strings("dsu", 5);
    std::size_t patterns = 0;
    for (int nodes = 1; nodes <= 4; ++nodes) {
        for (const auto& tree : oracle::trees(nodes, "dsu")) {
            const std::string text = oracle::render(tree);
            if (text.size() > 12) continue;
            CAPTURE(text);
            const SymbolPattern p = compile_pattern(text, usd());
            ++patterns;
            for (const auto& s : strings) {
                const auto expected = oracle::find_all(tree, s);
                const auto got = find_all(p, s);
                if (got != expected) {
                    CAPTURE(s);
                    CHECK(got == expected);
                }
                if (via_tokens(p, s) != expected) {
                    CAPTURE(s);
                    CHECK(via_tokens(p, s) == expected);
                }
                if (full_match(p, s) != oracle::accepts(tree, s)) {
                    CAPTURE(s);
                    CHECK(full_match(p, s) == oracle::accepts(tree, s));
                }
            }
        }
    }
    CHECK(patterns > 1000);
}

TEST_CASE("fuzzed patterns and streams agree with the oracle") {
    std::mt19937_64 rng(314);
    std::uniform_int_distribution<std::size_t> len(0, 64);
    for (int trial = 0; trial < 300; ++trial) {
        const oracle::Re tree = oracle::random_tree(rng, 8, "dsu");
        const std::string text = oracle::render(tree);
        CAPTURE(text);
        const SymbolPattern p = compile_pattern(text, usd());
        for (int k = 0; k < 10; ++k) {
            const std::string s = k % 2 ? oracle::random_string(rng, "dsu", len(rng))
                                        : oracle::random_runs(rng, "dsu", len(rng), 12);
            CAPTURE(s);
            const auto expected = oracle::find_all(tree, s);
            CHECK(find_all(p, s) == expected);
            CHECK(via_tokens(p, s) == expected);
            check_sane(p, s, expected);
        }
    }
}

TEST_CASE("token matching on long runs") {
    std::mt19937_64 rng(99);
    const std::vector<std::string> patterns = {"u{3}",     "u{2,5}d",  "u+",      "(uu)+",   "u*d",     ".{7}",
                                               "(u|s)+d?", "s{4,}u",   "(ud)+",   "u{3,}s*d", "(u+)+d", "d.{2,3}u",
                                               "s*",       "(u?s)*d+", "(uuu)*u", ".+"};
    for (const auto& text : patterns) {
        CAPTURE(text);
        const SymbolPattern p = compile_pattern(text, usd());
        for (int trial = 0; trial < 40; ++trial) {
            const std::string s = oracle::random_runs(rng, "dsu", 2000, 300);
            const auto expected = find_all(p, s);
            CHECK(via_tokens(p, s) == expected);
            check_sane(p, s, expected);
        }
        // A single huge run.
        const std::string run(100000, 'u');
        CHECK(via_tokens(p, run) == find_all(p, run));
    }
}

TEST_CASE("pathological nesting runs in linear time") {
    const SymbolPattern p = compile_pattern("(u+)+d", usd());
    const std::string s(100000, 'u');
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(find_all(p, s).empty());
    CHECK(find_all_tokens(p, compress_runs(s)).empty());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);
    std::string with_d = s + "d";
    CHECK(find_all(p, with_d) == std::vector<Match>{{0, 100001}});
}

TEST_CASE("compiled patterns are shareable across threads") {
    const SymbolPattern p = compile_pattern("u+d+|s{2,}", usd());
    std::mt19937_64 rng(5);
    std::vector<std::string> streams;
    for (int i = 0; i < 8; ++i) streams.push_back(oracle::random_runs(rng, "dsu", 5000, 8));
    std::vector<std::vector<Match>> serial;
    for (const auto& s : streams) serial.push_back(find_all(p, s));
    std::vector<std::vector<Match>> parallel(streams.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        threads.emplace_back([&, i] { parallel[i] = find_all(p, streams[i]); });
    }
    for (auto& t : threads) t.join();
    CHECK(parallel == serial);
}
