#include "ecna/automaton.hpp"

#include "ecna/error.hpp"
#include "ecna/run_engine.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace ecna;
using namespace ecna::testing;

TEST_CASE("the worked example validates cleanly") {
    CHECK(validate(trec_automaton()).empty());
    CHECK(validate(tpred_automaton()).empty());
    CHECK(validate(tcaller_automaton()).empty());
}

TEST_CASE("validation flags class mismatches and bottom pushes") {
    auto m = trec_automaton();
    m.pushes.push_back({"q0", "a", {}, {}, "q1", "g"}); // internal symbol pushed
    auto violations = validate(m);
    bool found = false;
    for (const auto& v : violations) found |= v.code == "SymbolClassMismatch";
    CHECK(found);

    auto m2 = trec_automaton();
    m2.pushes.push_back({"q1", "c", {}, {}, "q1", kStackBottom});
    found = false;
    for (const auto& v : validate(m2)) found |= v.code == "PushesBottom";
    CHECK(found);

    auto m3 = trec_automaton();
    ClockConstraint foreign;
    foreign.atoms.push_back({xg("b"), Interval::point(1)});
    m3.internals.push_back({"q0", "a", foreign, {}, "q1"});
    found = false;
    for (const auto& v : validate(m3)) found |= v.code == "UnknownClock";
    CHECK(found);
}

TEST_CASE("classification of the example and degenerate automata") {
    auto tags = classify(trec_automaton());
    CHECK(tags == std::set<ClassTag>{ClassTag::Nested, ClassTag::Ecna, ClassTag::Arcna});

    auto clockless = trec_automaton();
    clockless.event_clocks.clear();
    clockless.internals.clear();
    clockless.internals.push_back({"q0", "a", {}, {}, "q1"});
    CHECK(classify(clockless) ==
          std::set<ClassTag>{ClassTag::Nested, ClassTag::Ecna, ClassTag::Ecvpa,
                             ClassTag::Arcna, ClassTag::Apcna, ClassTag::Cecna,
                             ClassTag::Vpa, ClassTag::Vpta});

    auto tc = tcaller_automaton(); // caller clock only
    auto caller_tags = classify(tc);
    CHECK(caller_tags.count(ClassTag::Cecna));
    CHECK_FALSE(caller_tags.count(ClassTag::Arcna));
    CHECK_FALSE(caller_tags.count(ClassTag::Apcna));
}

TEST_CASE("classification is monotone under clock removal") {
    std::mt19937 rng(3);
    RandomAutomatonConfig cfg;
    cfg.clock_pool = {xg("a"), ya("b"), xc("c")};
    for (int iter = 0; iter < 20; ++iter) {
        auto m = random_automaton(rng, cfg);
        auto before = classify(m);
        auto shrunk = m;
        if (!shrunk.event_clocks.empty()) {
            // Drop one clock and every guard atom mentioning it.
            auto victim = *shrunk.event_clocks.begin();
            shrunk.event_clocks.erase(victim);
            auto scrub = [&](ClockConstraint& g) {
                std::erase_if(g.atoms, [&](const Atom& a) { return a.clock == victim; });
            };
            for (auto& t : shrunk.pushes) scrub(t.guard);
            for (auto& t : shrunk.pops) scrub(t.guard);
            for (auto& t : shrunk.internals) scrub(t.guard);
        }
        auto after = classify(shrunk);
        for (auto tag : before) CHECK(after.count(tag));
    }
}

TEST_CASE("constraint satisfaction") {
    ClockValuation val;
    val.values[xa("a")] = Rational(1);
    val.values[xg("b")] = std::nullopt;

    ClockConstraint exact;
    exact.atoms.push_back({xa("a"), Interval::point(1)});
    CHECK(constraint_sat({}, val, exact));

    ClockConstraint defined;
    defined.atoms.push_back({xg("b"), Interval::any_defined()});
    CHECK_FALSE(constraint_sat({}, val, defined));

    ClockConstraint undef;
    undef.atoms.push_back({xg("b"), Interval::undef_singleton()});
    CHECK(constraint_sat({}, val, undef));

    ClockConstraint missing;
    missing.atoms.push_back({std_clock("t"), Interval::point(0)});
    CHECK_THROWS_AS(constraint_sat({}, val, missing), Error);

    CHECK(constraint_sat({}, val, ClockConstraint{}));
}

TEST_CASE("greatest constant") {
    CHECK(greatest_constant(trec_automaton()) == 1);

    auto clockless = trec_automaton();
    for (auto& t : clockless.internals) t.guard = {};
    CHECK(greatest_constant(clockless) == 0);

    auto m = trec_automaton();
    ClockConstraint g;
    g.atoms.push_back({xa("a"), Interval::bounded(2, true, 5, false)});
    g.atoms.push_back({xa("a"), Interval::undef_singleton()});
    m.internals.push_back({"q0", "a", g, {}, "q0"});
    CHECK(greatest_constant(m) == 5);
}

TEST_CASE("interval algebra agrees with sampled membership") {
    std::mt19937 rng(23);
    auto sample_interval = [&] {
        if (std::uniform_int_distribution<int>(0, 5)(rng) == 0)
            return Interval::undef_singleton();
        unsigned long lo = std::uniform_int_distribution<int>(0, 3)(rng);
        bool ls = std::uniform_int_distribution<int>(0, 1)(rng);
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
            return Interval::at_least(lo, ls);
        unsigned long hi = lo + std::uniform_int_distribution<int>(0, 3)(rng);
        bool hs = lo == hi ? false : std::uniform_int_distribution<int>(0, 1)(rng);
        if (lo == hi) ls = false;
        return Interval::bounded(lo, ls, hi, hs);
    };
    std::vector<std::optional<Rational>> probes;
    probes.push_back(std::nullopt);
    for (int n = 0; n <= 28; ++n) probes.push_back(Rational(n, 4));

    for (int iter = 0; iter < 300; ++iter) {
        auto a = sample_interval();
        auto b = sample_interval();
        bool subset_seen = true, disjoint_seen = true;
        for (const auto& p : probes) {
            if (a.contains(p) && !b.contains(p)) subset_seen = false;
            if (a.contains(p) && b.contains(p)) disjoint_seen = false;
        }
        // Probes cover all region boundaries up to the sampled constants, so
        // the sampled verdicts are exact for these intervals.
        CHECK(a.subset_of(b) == subset_seen);
        CHECK(a.disjoint_from(b) == disjoint_seen);
    }
}

TEST_CASE("single-atom normalization") {
    auto z = xa("a");
    auto m = trec_automaton();

    auto norm = normalize_single_atom(m, z);
    for (const auto& t : norm.internals) {
        int count = 0;
        for (const auto& atom : t.guard.atoms)
            if (atom.clock == z) ++count;
        CHECK(count == 1);
    }
    // Unguarded transitions split in two, guarded ones stay single.
    CHECK(norm.internals.size() ==
          2 * m.internals.size() - 1); // q4->q5 already carries an atom
    CHECK(norm.pushes.size() == 2 * m.pushes.size());

    // Overlapping atoms intersect into one.
    NestedVpta m2 = m;
    ClockConstraint overlap;
    overlap.atoms.push_back({z, Interval::bounded(1, false, 3, false)});
    overlap.atoms.push_back({z, Interval::bounded(2, false, 5, false)});
    m2.internals.push_back({"q0", "b", overlap, {}, "q0"});
    auto norm2 = normalize_single_atom(m2, z);
    bool found = false;
    for (const auto& t : norm2.internals) {
        if (t.from == "q0" && t.symbol == "b") {
            found = true;
            REQUIRE(t.guard.atoms.size() == 1);
            CHECK(t.guard.atoms[0].interval == Interval::bounded(2, false, 3, false));
        }
    }
    CHECK(found);

    // Conflicting atoms drop the transition.
    NestedVpta m3 = m;
    ClockConstraint clash;
    clash.atoms.push_back({z, Interval::point(0)});
    clash.atoms.push_back({z, Interval::point(1)});
    m3.internals.push_back({"q0", "b", clash, {}, "q0"});
    auto norm3 = normalize_single_atom(m3, z);
    for (const auto& t : norm3.internals)
        CHECK(!(t.from == "q0" && t.symbol == "b"));

    CHECK(greatest_constant(norm) == greatest_constant(m));
}

TEST_CASE("normalization preserves membership on sampled words") {
    std::mt19937 rng(31);
    RandomAutomatonConfig cfg;
    cfg.clock_pool = {xa("a"), xg("b")};
    for (int iter = 0; iter < 10; ++iter) {
        auto m = random_automaton(rng, cfg);
        auto norm = normalize_single_atom(m, xa("a"));
        for (int k = 0; k < 20; ++k) {
            auto w = random_word(rng, 6);
            CHECK(accepts_finite(m, w) == accepts_finite(norm, w));
        }
    }
}
