#pragma once

#include "ecna/alphabet.hpp"

#include <compare>
#include <optional>
#include <string>

namespace ecna {

using ClockName = std::string;

// Five event clocks per symbol, plus resettable standard clocks.
// Recorders look backward, predictors forward; the global pair ranges over
// the whole word, the abstract pair over the surrounding procedure frame,
// and the caller recorder over the chain of pending calls.
enum class ClockKind {
    GlobalRecorder,    // xg(b)
    GlobalPredictor,   // yg(b)
    AbstractRecorder,  // xa(b)
    AbstractPredictor, // ya(b)
    CallerRecorder,    // xc(b)
    Standard,
};

struct ClockId {
    ClockKind kind = ClockKind::Standard;
    std::string name; // event clocks: the watched symbol; standard: clock name

    auto operator<=>(const ClockId&) const = default;

    bool is_event() const { return kind != ClockKind::Standard; }
    bool is_recorder() const {
        return kind == ClockKind::GlobalRecorder ||
               kind == ClockKind::AbstractRecorder ||
               kind == ClockKind::CallerRecorder;
    }
};

inline ClockId xg(const Symbol& b) { return {ClockKind::GlobalRecorder, b}; }
inline ClockId yg(const Symbol& b) { return {ClockKind::GlobalPredictor, b}; }
inline ClockId xa(const Symbol& b) { return {ClockKind::AbstractRecorder, b}; }
inline ClockId ya(const Symbol& b) { return {ClockKind::AbstractPredictor, b}; }
inline ClockId xc(const Symbol& b) { return {ClockKind::CallerRecorder, b}; }
inline ClockId std_clock(const ClockName& n) { return {ClockKind::Standard, n}; }

// "xg(a)" / "ya(b)" / bare name for standard clocks.
std::string clock_to_string(const ClockId& clock);

// Inverse of clock_to_string; a token that does not match an event-clock
// pattern is read as a standard clock.
ClockId parse_clock(const std::string& token);

} // namespace ecna
