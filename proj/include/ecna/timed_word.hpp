#pragma once

#include "ecna/alphabet.hpp"
#include "ecna/clocks.hpp"
#include "ecna/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecna {

struct TimedLetter {
    Symbol symbol;
    Rational time;

    bool operator==(const TimedLetter& o) const {
        return symbol == o.symbol && time == o.time;
    }
};

// Finite timed word; timestamps are non-negative and non-decreasing.
struct TimedWord {
    std::vector<TimedLetter> letters;

    bool operator==(const TimedWord&) const = default;

    size_t size() const { return letters.size(); }
    std::vector<Symbol> symbols() const;
    std::optional<std::string> check() const;
};

// --- structural functions over untimed symbol sequences ------------------

// Position of the unique return closing the call at i, if it exists within
// the word. Throws PositionNotACall / OutOfBounds.
std::optional<size_t> matching_return(const std::vector<Symbol>& word,
                                      const PushdownAlphabet& alphabet, size_t i);

// Next position in the same procedure frame: a call jumps to its matching
// return, anything else steps to i+1 unless that is a return.
std::optional<size_t> abstract_successor(const std::vector<Symbol>& word,
                                         const PushdownAlphabet& alphabet, size_t i);

// Greatest call position j < i whose matching return is absent or lies
// beyond i.
std::optional<size_t> caller(const std::vector<Symbol>& word,
                             const PushdownAlphabet& alphabet, size_t i);

// The maximal abstract path through i, truncated at the end of the word.
std::vector<size_t> map_of(const std::vector<Symbol>& word,
                           const PushdownAlphabet& alphabet, size_t i);

// i followed by its chain of enclosing pending calls.
std::vector<size_t> caller_path(const std::vector<Symbol>& word,
                                const PushdownAlphabet& alphabet, size_t i);

bool is_well_matched(const std::vector<Symbol>& word,
                     const PushdownAlphabet& alphabet);

// --- deterministic event-clock valuations --------------------------------

struct ClockValuation {
    std::map<ClockId, std::optional<Rational>> values;

    bool has(const ClockId& clock) const { return values.count(clock) != 0; }
    // Throws UnknownClock when the clock is not present.
    const std::optional<Rational>& at(const ClockId& clock) const;
};

// Values of all event clocks of the alphabet at position i. Recorders take
// the last matching occurrence before i within their position set, bot when
// none; predictors the next one after i, bot beyond the end of the word.
ClockValuation clock_valuation(const TimedWord& word,
                               const PushdownAlphabet& alphabet, size_t i);

} // namespace ecna
