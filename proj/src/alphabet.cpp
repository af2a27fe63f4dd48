#include "ecna/alphabet.hpp"

#include <algorithm>

namespace ecna {

std::vector<Symbol> PushdownAlphabet::all() const {
    std::vector<Symbol> out;
    out.insert(out.end(), calls.begin(), calls.end());
    out.insert(out.end(), returns.begin(), returns.end());
    out.insert(out.end(), internals.begin(), internals.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::string> PushdownAlphabet::check() const {
    if (calls.empty() && returns.empty() && internals.empty())
        return "alphabet is empty";
    for (const auto& s : calls) {
        if (returns.count(s)) return "symbol in both calls and returns: " + s;
        if (internals.count(s)) return "symbol in both calls and internals: " + s;
    }
    for (const auto& s : returns)
        if (internals.count(s)) return "symbol in both returns and internals: " + s;
    return std::nullopt;
}

} // namespace ecna
