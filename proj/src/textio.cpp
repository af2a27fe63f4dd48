#include "ecna/textio.hpp"

#include "ecna/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ecna {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] void parse_fail(const std::string& origin, size_t line,
                             const std::string& message) {
    fail(ErrorCode::Parse,
         origin + ":" + std::to_string(line) + ": " + message);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write " + path);
    out << text;
}

std::set<Symbol> parse_symbol_list(const std::string& text) {
    std::set<Symbol> out;
    for (auto& item : split_commas(text)) {
        auto s = trim(item);
        if (!s.empty()) out.insert(s);
    }
    return out;
}

std::string join(const std::set<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

} // namespace

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    int depth = 0;
    for (char c : text) {
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    out.push_back(current);
    return out;
}

// --- timed words ----------------------------------------------------------

TimedWordFile parse_timed_word_text(const std::string& text,
                                    const std::string& origin) {
    TimedWordFile out;
    bool saw_alphabet = false;
    std::istringstream in(text);
    std::string raw;
    size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (!saw_alphabet) {
            if (line.rfind("alphabet:", 0) != 0)
                parse_fail(origin, lineno, "expected alphabet header");
            std::istringstream fields(line.substr(9));
            std::string field;
            while (fields >> field) {
                auto eq = field.find('=');
                if (eq == std::string::npos)
                    parse_fail(origin, lineno, "bad alphabet field: " + field);
                auto key = field.substr(0, eq);
                auto value = field.substr(eq + 1);
                if (key == "calls") out.alphabet.calls = parse_symbol_list(value);
                else if (key == "returns") out.alphabet.returns = parse_symbol_list(value);
                else if (key == "internals") out.alphabet.internals = parse_symbol_list(value);
                else parse_fail(origin, lineno, "unknown alphabet field: " + key);
            }
            if (auto bad = out.alphabet.check()) parse_fail(origin, lineno, *bad);
            saw_alphabet = true;
            continue;
        }
        std::istringstream fields(line);
        std::string sym, stamp;
        if (!(fields >> sym >> stamp))
            parse_fail(origin, lineno, "expected 'symbol timestamp'");
        std::string extra;
        if (fields >> extra) parse_fail(origin, lineno, "trailing content: " + extra);
        if (!out.alphabet.contains(sym))
            parse_fail(origin, lineno, "symbol not in alphabet: " + sym);
        Rational t;
        try {
            t = parse_rational(stamp);
        } catch (const Error& e) {
            parse_fail(origin, lineno, e.what());
        }
        out.word.letters.push_back({sym, t});
    }
    if (!saw_alphabet) parse_fail(origin, lineno, "missing alphabet header");
    if (auto bad = out.word.check()) fail(ErrorCode::Parse, origin + ": " + *bad);
    return out;
}

TimedWordFile load_timed_word(const std::string& path) {
    return parse_timed_word_text(read_file(path), path);
}

std::string serialize_timed_word(const TimedWordFile& f) {
    std::ostringstream os;
    os << "alphabet: calls=" << join(f.alphabet.calls)
       << " returns=" << join(f.alphabet.returns)
       << " internals=" << join(f.alphabet.internals) << "\n";
    for (const auto& l : f.word.letters)
        os << l.symbol << " " << format_rational(l.time) << "\n";
    return os.str();
}

void save_timed_word(const TimedWordFile& f, const std::string& path) {
    write_file(path, serialize_timed_word(f));
}

// --- automata --------------------------------------------------------------

namespace {

ClockConstraint parse_constraint(const std::string& text, const std::string& origin,
                                 size_t lineno) {
    ClockConstraint out;
    auto t = trim(text);
    if (t.empty() || t == "true") return out;
    for (auto& part : split_commas(t)) {
        auto atom_text = trim(part);
        auto in_pos = atom_text.find(" in ");
        if (in_pos == std::string::npos)
            parse_fail(origin, lineno, "bad atom (expected 'clock in interval'): " + atom_text);
        auto clock_text = trim(atom_text.substr(0, in_pos));
        auto interval_text = trim(atom_text.substr(in_pos + 4));
        try {
            out.atoms.push_back({parse_clock(clock_text), parse_interval(interval_text)});
        } catch (const Error& e) {
            parse_fail(origin, lineno, e.what());
        }
    }
    return out;
}

std::set<ClockName> parse_reset_set(const std::string& text, const std::string& origin,
                                    size_t lineno) {
    auto t = trim(text);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
        parse_fail(origin, lineno, "bad reset set: " + text);
    std::set<ClockName> out;
    for (auto& item : split_commas(t.substr(1, t.size() - 2))) {
        auto name = trim(item);
        if (!name.empty()) out.insert(name);
    }
    return out;
}

struct TransitionLine {
    State from, to;
    Symbol symbol;
    ClockConstraint guard;
    std::set<ClockName> resets;
    enum class Op { None, Push, Pop } op = Op::None;
    StackSymbol stack_symbol;
};

TransitionLine parse_transition(const std::string& line, const std::string& origin,
                                size_t lineno) {
    auto arrow_open = line.find("--");
    if (arrow_open == std::string::npos)
        parse_fail(origin, lineno, "expected transition arrow");
    auto arrow_close = line.find("-->", arrow_open + 2);
    if (arrow_close == std::string::npos)
        parse_fail(origin, lineno, "unterminated transition arrow");

    TransitionLine out;
    out.from = trim(line.substr(0, arrow_open));
    out.to = trim(line.substr(arrow_close + 3));
    if (out.from.empty() || out.to.empty())
        parse_fail(origin, lineno, "missing transition endpoint");

    auto body = line.substr(arrow_open + 2, arrow_close - arrow_open - 2);
    std::vector<std::string> fields;
    {
        std::string cur;
        int depth = 0;
        for (char c : body) {
            if (c == '(' || c == '{' || c == '[') ++depth;
            if (c == ')' || c == '}' || c == ']') --depth;
            if (c == '/' && depth == 0) {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        fields.push_back(cur);
    }
    if (fields.empty()) parse_fail(origin, lineno, "empty transition body");
    out.symbol = trim(fields[0]);
    if (out.symbol.empty()) parse_fail(origin, lineno, "missing symbol");
    for (size_t i = 1; i < fields.size(); ++i) {
        auto f = trim(fields[i]);
        if (f.rfind("reset", 0) == 0) {
            out.resets = parse_reset_set(trim(f.substr(5)), origin, lineno);
        } else if (f.rfind("push", 0) == 0) {
            out.op = TransitionLine::Op::Push;
            out.stack_symbol = trim(f.substr(4));
            if (out.stack_symbol.empty()) parse_fail(origin, lineno, "missing push symbol");
        } else if (f.rfind("pop", 0) == 0) {
            out.op = TransitionLine::Op::Pop;
            out.stack_symbol = trim(f.substr(3));
            if (out.stack_symbol.empty()) parse_fail(origin, lineno, "missing pop symbol");
        } else {
            out.guard = parse_constraint(f, origin, lineno);
        }
    }
    return out;
}

} // namespace

NestedVpta parse_automaton_text(const std::string& text, const std::string& origin) {
    NestedVpta a;
    bool saw_finite_accepting = false;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            auto close = line.find(']');
            if (close == std::string::npos)
                parse_fail(origin, lineno, "unterminated section header");
            section = line.substr(1, close - 1);
            auto rest = trim(line.substr(close + 1));
            if (rest.empty()) continue;
            line = rest; // inline section content
        }
        if (section == "alphabet") {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                parse_fail(origin, lineno, "expected 'calls|returns|internals = ...'");
            auto key = trim(line.substr(0, eq));
            auto value = line.substr(eq + 1);
            if (key == "calls") a.alphabet.calls = parse_symbol_list(value);
            else if (key == "returns") a.alphabet.returns = parse_symbol_list(value);
            else if (key == "internals") a.alphabet.internals = parse_symbol_list(value);
            else parse_fail(origin, lineno, "unknown alphabet key: " + key);
        } else if (section == "states") {
            auto set = parse_symbol_list(line);
            a.states.insert(set.begin(), set.end());
        } else if (section == "initial") {
            auto set = parse_symbol_list(line);
            a.initial.insert(set.begin(), set.end());
        } else if (section == "accepting") {
            auto eq = line.find('=');
            auto value = eq == std::string::npos ? line : line.substr(eq + 1);
            a.buchi.push_back(parse_symbol_list(value));
        } else if (section == "finite-accepting") {
            saw_finite_accepting = true;
            auto set = parse_symbol_list(line);
            a.finite_accepting.insert(set.begin(), set.end());
        } else if (section == "event-clocks") {
            for (auto& item : split_commas(line)) {
                auto tok = trim(item);
                if (tok.empty()) continue;
                auto clock = parse_clock(tok);
                if (clock.kind == ClockKind::Standard)
                    parse_fail(origin, lineno, "not an event clock: " + tok);
                a.event_clocks.insert(clock);
            }
        } else if (section == "standard-clocks") {
            auto set = parse_symbol_list(line);
            a.standard_clocks.insert(set.begin(), set.end());
        } else if (section == "stack") {
            auto set = parse_symbol_list(line);
            a.stack.insert(set.begin(), set.end());
        } else if (section == "transitions") {
            auto t = parse_transition(line, origin, lineno);
            auto cls = a.alphabet.classify(t.symbol);
            if (!cls) parse_fail(origin, lineno, "symbol not in alphabet: " + t.symbol);
            switch (t.op) {
                case TransitionLine::Op::Push:
                    a.pushes.push_back({t.from, t.symbol, t.guard, t.resets, t.to,
                                        t.stack_symbol});
                    break;
                case TransitionLine::Op::Pop:
                    a.pops.push_back({t.from, t.symbol, t.guard, t.resets,
                                      t.stack_symbol, t.to});
                    break;
                case TransitionLine::Op::None:
                    if (*cls == SymbolClass::Call)
                        parse_fail(origin, lineno, "call transition needs 'push g'");
                    if (*cls == SymbolClass::Return)
                        parse_fail(origin, lineno, "return transition needs 'pop g'");
                    a.internals.push_back({t.from, t.symbol, t.guard, t.resets, t.to});
                    break;
            }
        } else if (section.empty()) {
            parse_fail(origin, lineno, "content before first section");
        } else {
            parse_fail(origin, lineno, "unknown section: " + section);
        }
    }
    if (!saw_finite_accepting)
        for (const auto& f : a.buchi) a.finite_accepting.insert(f.begin(), f.end());
    a.sort_transitions();
    return a;
}

NestedVpta load_automaton(const std::string& path) {
    return parse_automaton_text(read_file(path), path);
}

std::string serialize_automaton(const NestedVpta& input) {
    NestedVpta a = input;
    a.sort_transitions();
    std::ostringstream os;
    os << "[alphabet]\n";
    os << "calls = " << join(a.alphabet.calls) << "\n";
    os << "returns = " << join(a.alphabet.returns) << "\n";
    os << "internals = " << join(a.alphabet.internals) << "\n";
    os << "[states] " << join(a.states) << "\n";
    os << "[initial] " << join(a.initial) << "\n";
    os << "[accepting]\n";
    for (size_t i = 0; i < a.buchi.size(); ++i)
        os << "F" << (i + 1) << " = " << join(a.buchi[i]) << "\n";
    os << "[finite-accepting] " << join(a.finite_accepting) << "\n";
    {
        std::set<std::string> clocks;
        for (const auto& z : a.event_clocks) clocks.insert(clock_to_string(z));
        os << "[event-clocks] " << join(clocks) << "\n";
    }
    os << "[standard-clocks] " << join(a.standard_clocks) << "\n";
    os << "[stack] " << join(a.stack) << "\n";
    os << "[transitions]\n";
    std::vector<std::string> lines;
    auto guard_and_resets = [](const ClockConstraint& g, const std::set<ClockName>& r) {
        std::string out = " / " + g.str() + " / reset {";
        bool first = true;
        for (const auto& c : r) {
            if (!first) out += ",";
            out += c;
            first = false;
        }
        return out + "}";
    };
    for (const auto& t : a.pushes)
        lines.push_back(t.from + " --" + t.symbol + guard_and_resets(t.guard, t.resets) +
                        " / push " + t.push + "--> " + t.to);
    for (const auto& t : a.pops)
        lines.push_back(t.from + " --" + t.symbol + guard_and_resets(t.guard, t.resets) +
                        " / pop " + t.pop + "--> " + t.to);
    for (const auto& t : a.internals)
        lines.push_back(t.from + " --" + t.symbol + guard_and_resets(t.guard, t.resets) +
                        "--> " + t.to);
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << l << "\n";
    return os.str();
}

void save_automaton(const NestedVpta& a, const std::string& path) {
    write_file(path, serialize_automaton(a));
}

} // namespace ecna
