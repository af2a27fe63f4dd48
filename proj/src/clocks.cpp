#include "ecna/clocks.hpp"

#include "ecna/error.hpp"

namespace ecna {

namespace {

const char* kind_prefix(ClockKind kind) {
    switch (kind) {
        case ClockKind::GlobalRecorder: return "xg";
        case ClockKind::GlobalPredictor: return "yg";
        case ClockKind::AbstractRecorder: return "xa";
        case ClockKind::AbstractPredictor: return "ya";
        case ClockKind::CallerRecorder: return "xc";
        case ClockKind::Standard: return "";
    }
    return "";
}

std::optional<ClockKind> kind_of_prefix(const std::string& p) {
    if (p == "xg") return ClockKind::GlobalRecorder;
    if (p == "yg") return ClockKind::GlobalPredictor;
    if (p == "xa") return ClockKind::AbstractRecorder;
    if (p == "ya") return ClockKind::AbstractPredictor;
    if (p == "xc") return ClockKind::CallerRecorder;
    return std::nullopt;
}

} // namespace

std::string clock_to_string(const ClockId& clock) {
    if (clock.kind == ClockKind::Standard) return clock.name;
    return std::string(kind_prefix(clock.kind)) + "(" + clock.name + ")";
}

ClockId parse_clock(const std::string& token) {
    if (token.size() >= 4 && token[2] == '(' && token.back() == ')') {
        if (auto kind = kind_of_prefix(token.substr(0, 2))) {
            std::string sym = token.substr(3, token.size() - 4);
            if (sym.empty()) fail(ErrorCode::Parse, "empty clock symbol in " + token);
            return {*kind, sym};
        }
    }
    if (token.empty()) fail(ErrorCode::Parse, "empty clock name");
    return std_clock(token);
}

} // namespace ecna
