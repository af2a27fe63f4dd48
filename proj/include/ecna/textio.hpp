#pragma once

#include "ecna/automaton.hpp"
#include "ecna/timed_word.hpp"

#include <string>

namespace ecna {

// Line-oriented timed-word file: an alphabet header followed by one
// "symbol timestamp" line per letter. '#' starts a comment.
struct TimedWordFile {
    PushdownAlphabet alphabet;
    TimedWord word;

    bool operator==(const TimedWordFile&) const = default;
};

TimedWordFile parse_timed_word_text(const std::string& text,
                                    const std::string& origin = "<text>");
TimedWordFile load_timed_word(const std::string& path);
std::string serialize_timed_word(const TimedWordFile& f);
void save_timed_word(const TimedWordFile& f, const std::string& path);

// Sectioned automaton file; see README for the grammar. Serialization is
// canonical: states, sets and transitions come out sorted, so a written
// automaton re-parses to an identical structure.
NestedVpta parse_automaton_text(const std::string& text,
                                const std::string& origin = "<text>");
NestedVpta load_automaton(const std::string& path);
std::string serialize_automaton(const NestedVpta& a);
void save_automaton(const NestedVpta& a, const std::string& path);

// Splits on top-level commas only; commas inside (), {} and [] do not count.
std::vector<std::string> split_commas(const std::string& text);

} // namespace ecna
