#include "ecna/timed_word.hpp"

#include "ecna/error.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace ecna;
using namespace ecna::testing;

namespace {

// Independent matcher used as an oracle: explicit stack scan instead of the
// recursive definitions in the library.
std::optional<size_t> oracle_matching_return(const std::vector<Symbol>& w,
                                             const PushdownAlphabet& s, size_t i) {
    std::vector<size_t> stack;
    for (size_t j = 0; j < w.size(); ++j) {
        auto cls = *s.classify(w[j]);
        if (cls == SymbolClass::Call) stack.push_back(j);
        if (cls == SymbolClass::Return && !stack.empty()) {
            size_t call = stack.back();
            stack.pop_back();
            if (call == i) return j;
        }
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("matching returns on the worked word") {
    auto s = example_alphabet();
    auto w = sigma_p();
    CHECK(matching_return(w, s, 1) == 6);
    CHECK(matching_return(w, s, 3) == 5);
    CHECK(matching_return(w, s, 0) == std::nullopt);
    CHECK(matching_return(w, s, 7) == 9);
    CHECK_THROWS_AS(matching_return(w, s, 2), Error);   // not a call
    CHECK_THROWS_AS(matching_return(w, s, 42), Error);  // out of bounds
}

TEST_CASE("abstract successors on the worked word") {
    auto s = example_alphabet();
    auto w = sigma_p();
    CHECK(abstract_successor(w, s, 2) == 3);
    CHECK(abstract_successor(w, s, 4) == std::nullopt);
    CHECK(abstract_successor(w, s, 1) == 6);
    CHECK(abstract_successor(w, s, 0) == std::nullopt); // unmatched call
    CHECK(abstract_successor(w, s, 10) == std::nullopt);
}

TEST_CASE("callers on the worked word") {
    auto s = example_alphabet();
    auto w = sigma_p();
    CHECK(caller(w, s, 2) == 1);
    CHECK(caller(w, s, 4) == 3);
    CHECK(caller(w, s, 0) == std::nullopt);
    CHECK(caller(w, s, 8) == 7);
    CHECK(caller(w, s, 10) == 0);
}

TEST_CASE("maximal abstract paths") {
    auto s = example_alphabet();
    auto w = sigma_p();
    CHECK(map_of(w, s, 2) == std::vector<size_t>{2, 3, 5});
    CHECK(map_of(w, s, 1) == std::vector<size_t>{1, 6, 7, 9, 10});
    CHECK(map_of(w, s, 4) == std::vector<size_t>{4});
    CHECK(map_of(w, s, 0) == std::vector<size_t>{0});
}

TEST_CASE("caller paths") {
    auto s = example_alphabet();
    auto w = sigma_p();
    CHECK(caller_path(w, s, 4) == std::vector<size_t>{4, 3, 1, 0});
    CHECK(caller_path(w, s, 0) == std::vector<size_t>{0});
    CHECK(caller_path(w, s, 2) == std::vector<size_t>{2, 1, 0});
}

TEST_CASE("well-matched words") {
    auto s = example_alphabet();
    CHECK(is_well_matched({}, s));
    CHECK(is_well_matched({"a", "c", "a", "r", "b", "b"}, s));
    CHECK_FALSE(is_well_matched({"c"}, s));
    CHECK_FALSE(is_well_matched({"r", "c"}, s));
    CHECK(is_well_matched({"c", "c", "r", "r"}, s));
}

TEST_CASE("clock valuation on v2") {
    auto s = example_alphabet();
    auto w = v2_word();

    auto at5 = clock_valuation(w, s, 5);
    // The frame through position 5 is 0,1,3,4,5; the last a on it sits at 0.
    CHECK(at5.at(xa("a")) == Rational(1));
    CHECK(at5.at(xg("a")) == Rational(9, 10));
    CHECK(at5.at(xg("b")) == Rational(9, 10));
    CHECK(at5.at(ya("b")) == std::nullopt);

    auto at0 = clock_valuation(w, s, 0);
    for (const auto& b : s.all()) {
        CHECK(at0.at(xg(b)) == std::nullopt);
        CHECK(at0.at(xa(b)) == std::nullopt);
        CHECK(at0.at(xc(b)) == std::nullopt);
    }

    auto at2 = clock_valuation(w, s, 2);
    CHECK(at2.at(xg("a")) == Rational(1, 10));
    CHECK(at2.at(xa("a")) == std::nullopt); // position 2 starts its own frame

    CHECK_THROWS_AS(clock_valuation(w, s, 6), Error);
    CHECK_THROWS_AS(at2.at(std_clock("z")), Error);
}

TEST_CASE("every position lies on exactly one abstract path") {
    auto s = example_alphabet();
    std::mt19937 rng(7);
    for (int iter = 0; iter < 40; ++iter) {
        auto w = random_word(rng, 10);
        auto symbols = w.symbols();
        for (size_t i = 0; i < symbols.size(); ++i) {
            auto path = map_of(symbols, s, i);
            size_t hits = 0;
            for (size_t p : path)
                if (p == i) ++hits;
            CHECK(hits == 1);
            // The path is the same object seen from any of its members.
            for (size_t p : path) CHECK(map_of(symbols, s, p) == path);
            // Consecutive members are abstract successors.
            for (size_t k = 0; k + 1 < path.size(); ++k)
                CHECK(abstract_successor(symbols, s, path[k]) == path[k + 1]);
            // Every member has the same caller.
            auto head_caller = caller(symbols, s, path.front());
            for (size_t p : path) CHECK(caller(symbols, s, p) == head_caller);
        }
    }
}

TEST_CASE("matching returns close well-matched segments") {
    auto s = example_alphabet();
    std::mt19937 rng(11);
    for (int iter = 0; iter < 40; ++iter) {
        auto w = random_word(rng, 10);
        auto symbols = w.symbols();
        for (size_t i = 0; i < symbols.size(); ++i) {
            if (s.classify(symbols[i]) != SymbolClass::Call) continue;
            auto j = matching_return(symbols, s, i);
            CHECK(j == oracle_matching_return(symbols, s, i));
            if (j) {
                std::vector<Symbol> inner(symbols.begin() + i + 1,
                                          symbols.begin() + *j);
                CHECK(is_well_matched(inner, s));
            }
        }
    }
}

TEST_CASE("valuations are bounded by elapsed time") {
    auto s = example_alphabet();
    std::mt19937 rng(13);
    for (int iter = 0; iter < 30; ++iter) {
        auto w = random_word(rng, 8);
        for (size_t i = 0; i < w.size(); ++i) {
            auto val = clock_valuation(w, s, i);
            for (const auto& [clock, v] : val.values) {
                if (!v) continue;
                CHECK(*v >= 0);
                if (clock.is_recorder())
                    CHECK(*v <= w.letters[i].time);
                else
                    CHECK(*v <= w.letters.back().time - w.letters[i].time);
            }
        }
    }
}

TEST_CASE("without calls and returns the frame clocks match the global ones") {
    auto s = example_alphabet();
    std::mt19937 rng(17);
    for (int iter = 0; iter < 30; ++iter) {
        TimedWord w;
        Rational now = 0;
        size_t len = std::uniform_int_distribution<size_t>(1, 8)(rng);
        for (size_t i = 0; i < len; ++i) {
            const char* internals[] = {"a", "b", "i"};
            now += Rational(std::uniform_int_distribution<int>(0, 3)(rng), 2);
            w.letters.push_back({internals[std::uniform_int_distribution<int>(0, 2)(rng)], now});
        }
        for (size_t i = 0; i < w.size(); ++i) {
            auto val = clock_valuation(w, s, i);
            for (const auto& b : s.all()) {
                CHECK(val.at(xa(b)) == val.at(xg(b)));
                CHECK(val.at(ya(b)) == val.at(yg(b)));
                CHECK(val.at(xc(b)) == std::nullopt);
            }
        }
    }
}

TEST_CASE("timed word sanity checks") {
    TimedWord w;
    w.letters = {{"a", Rational(1)}, {"b", Rational(0)}};
    CHECK(w.check().has_value());
    w.letters = {{"a", Rational(0)}, {"b", Rational(0)}};
    CHECK_FALSE(w.check().has_value());
}
