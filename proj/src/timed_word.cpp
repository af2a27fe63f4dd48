#include "ecna/timed_word.hpp"

#include "ecna/error.hpp"

#include <algorithm>

namespace ecna {

std::vector<Symbol> TimedWord::symbols() const {
    std::vector<Symbol> out;
    out.reserve(letters.size());
    for (const auto& l : letters) out.push_back(l.symbol);
    return out;
}

std::optional<std::string> TimedWord::check() const {
    for (size_t i = 0; i < letters.size(); ++i) {
        if (letters[i].time < 0)
            return "negative timestamp at position " + std::to_string(i);
        if (i > 0 && letters[i].time < letters[i - 1].time)
            return "timestamps decrease at position " + std::to_string(i);
    }
    return std::nullopt;
}

namespace {

void check_bounds(const std::vector<Symbol>& word, size_t i) {
    if (i >= word.size())
        fail(ErrorCode::OutOfBounds,
             "position " + std::to_string(i) + " beyond word of length " +
                 std::to_string(word.size()));
}

SymbolClass class_at(const std::vector<Symbol>& word,
                     const PushdownAlphabet& alphabet, size_t i) {
    auto c = alphabet.classify(word[i]);
    if (!c)
        fail(ErrorCode::AlphabetMismatch,
             "symbol not in alphabet: " + word[i]);
    return *c;
}

} // namespace

std::optional<size_t> matching_return(const std::vector<Symbol>& word,
                                      const PushdownAlphabet& alphabet, size_t i) {
    check_bounds(word, i);
    if (class_at(word, alphabet, i) != SymbolClass::Call)
        fail(ErrorCode::PositionNotACall,
             "position " + std::to_string(i) + " is not a call");
    long depth = 1;
    for (size_t j = i + 1; j < word.size(); ++j) {
        switch (class_at(word, alphabet, j)) {
            case SymbolClass::Call: ++depth; break;
            case SymbolClass::Return:
                --depth;
                if (depth == 0) return j;
                break;
            case SymbolClass::Internal: break;
        }
    }
    return std::nullopt;
}

std::optional<size_t> abstract_successor(const std::vector<Symbol>& word,
                                         const PushdownAlphabet& alphabet, size_t i) {
    check_bounds(word, i);
    if (class_at(word, alphabet, i) == SymbolClass::Call)
        return matching_return(word, alphabet, i);
    if (i + 1 >= word.size()) return std::nullopt;
    if (class_at(word, alphabet, i + 1) == SymbolClass::Return) return std::nullopt;
    return i + 1;
}

std::optional<size_t> caller(const std::vector<Symbol>& word,
                             const PushdownAlphabet& alphabet, size_t i) {
    check_bounds(word, i);
    for (size_t j = i; j-- > 0;) {
        if (class_at(word, alphabet, j) != SymbolClass::Call) continue;
        auto ret = matching_return(word, alphabet, j);
        if (!ret || *ret > i) return j;
    }
    return std::nullopt;
}

std::vector<size_t> map_of(const std::vector<Symbol>& word,
                           const PushdownAlphabet& alphabet, size_t i) {
    check_bounds(word, i);
    // Each position has a unique abstract predecessor, so walking back from i
    // finds the start of its path.
    std::vector<std::optional<size_t>> pred(word.size());
    for (size_t j = 0; j < word.size(); ++j) {
        auto s = abstract_successor(word, alphabet, j);
        if (s) pred[*s] = j;
    }
    size_t start = i;
    while (pred[start]) start = *pred[start];
    std::vector<size_t> path{start};
    for (auto next = abstract_successor(word, alphabet, start); next;
         next = abstract_successor(word, alphabet, *next))
        path.push_back(*next);
    return path;
}

std::vector<size_t> caller_path(const std::vector<Symbol>& word,
                                const PushdownAlphabet& alphabet, size_t i) {
    check_bounds(word, i);
    std::vector<size_t> path{i};
    auto up = caller(word, alphabet, i);
    while (up) {
        path.push_back(*up);
        up = caller(word, alphabet, *up);
    }
    return path;
}

bool is_well_matched(const std::vector<Symbol>& word,
                     const PushdownAlphabet& alphabet) {
    long depth = 0;
    for (size_t j = 0; j < word.size(); ++j) {
        switch (class_at(word, alphabet, j)) {
            case SymbolClass::Call: ++depth; break;
            case SymbolClass::Return:
                --depth;
                if (depth < 0) return false;
                break;
            case SymbolClass::Internal: break;
        }
    }
    return depth == 0;
}

const std::optional<Rational>& ClockValuation::at(const ClockId& clock) const {
    auto it = values.find(clock);
    if (it == values.end())
        fail(ErrorCode::UnknownClock, "no value for clock " + clock_to_string(clock));
    return it->second;
}

namespace {

std::optional<Rational> recorder_value(const TimedWord& w, const Symbol& b,
                                       const std::vector<size_t>& positions,
                                       size_t i) {
    std::optional<size_t> best;
    for (size_t j : positions) {
        if (j >= i) continue;
        if (w.letters[j].symbol != b) continue;
        if (!best || j > *best) best = j;
    }
    if (!best) return std::nullopt;
    return Rational(w.letters[i].time - w.letters[*best].time);
}

std::optional<Rational> predictor_value(const TimedWord& w, const Symbol& b,
                                        const std::vector<size_t>& positions,
                                        size_t i) {
    std::optional<size_t> best;
    for (size_t j : positions) {
        if (j <= i) continue;
        if (w.letters[j].symbol != b) continue;
        if (!best || j < *best) best = j;
    }
    if (!best) return std::nullopt;
    return Rational(w.letters[*best].time - w.letters[i].time);
}

} // namespace

ClockValuation clock_valuation(const TimedWord& word,
                               const PushdownAlphabet& alphabet, size_t i) {
    if (i >= word.size())
        fail(ErrorCode::OutOfBounds, "position beyond word end");
    const auto symbols = word.symbols();
    std::vector<size_t> global(word.size());
    for (size_t j = 0; j < word.size(); ++j) global[j] = j;
    const auto abstract = map_of(symbols, alphabet, i);
    const auto callers = caller_path(symbols, alphabet, i);

    ClockValuation val;
    for (const auto& b : alphabet.all()) {
        val.values[xg(b)] = recorder_value(word, b, global, i);
        val.values[yg(b)] = predictor_value(word, b, global, i);
        val.values[xa(b)] = recorder_value(word, b, abstract, i);
        val.values[ya(b)] = predictor_value(word, b, abstract, i);
        val.values[xc(b)] = recorder_value(word, b, callers, i);
    }
    return val;
}

} // namespace ecna
