#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ecna {

using Symbol = std::string;

enum class SymbolClass { Call, Return, Internal };

// Visible alphabet: every symbol is a call, a return, or an internal action.
// Calls force a push, returns a pop, internals leave the stack alone.
struct PushdownAlphabet {
    std::set<Symbol> calls;
    std::set<Symbol> returns;
    std::set<Symbol> internals;

    bool operator==(const PushdownAlphabet&) const = default;

    bool contains(const Symbol& s) const {
        return calls.count(s) || returns.count(s) || internals.count(s);
    }

    std::optional<SymbolClass> classify(const Symbol& s) const {
        if (calls.count(s)) return SymbolClass::Call;
        if (returns.count(s)) return SymbolClass::Return;
        if (internals.count(s)) return SymbolClass::Internal;
        return std::nullopt;
    }

    std::vector<Symbol> all() const;

    // Empty on success, otherwise a description of the first problem found
    // (overlapping classes or an empty alphabet).
    std::optional<std::string> check() const;
};

} // namespace ecna
