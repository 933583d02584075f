#include "spectra/analysis/analyses.hpp"
#include "spectra/syntax/parser.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace spectra;
using namespace spectra::analysis;

namespace {

sema::CheckedSpec checked(const std::string& text) { return sema::check(syntax::parse(text, "a.spectra")); }

std::vector<std::string> labels(const CoreReport& r) {
    std::vector<std::string> out;
    for (const auto& c : r.core)
        out.push_back(c.label);
    return out;
}

// Realizability with only the guarantees named in `keep`, decided by the
// explicit oracle on the re-printed source.
bool oracle_realizable(const std::string& header, const std::vector<std::string>& guarantees,
                       unsigned mask) {
    std::string text = header;
    for (std::size_t i = 0; i < guarantees.size(); ++i)
        if (mask & (1u << i))
            text += guarantees[i];
    return oracle::solve_explicit(support::lower_text(text));
}

const std::string xy = "spec T env boolean x; sys boolean y; ";

} // namespace

TEST(Core, ContradictoryInitialGuarantees) {
    auto r = unrealizable_core(checked(xy + "gar a: ini y; gar b: ini !y; gar c: alwEv y;"));
    EXPECT_EQ(labels(r), (std::vector<std::string>{"a", "b"}));
    EXPECT_TRUE(r.minimal);
    EXPECT_GT(r.checks, 0u);
}

TEST(Core, SingleContradiction) {
    auto r = unrealizable_core(checked(xy + "gar alw y; gar never: alw false; gar alwEv y;"));
    EXPECT_EQ(labels(r), (std::vector<std::string>{"never"}));
}

TEST(Core, UnnamedGuaranteesAreLabelledByText) {
    auto r = unrealizable_core(checked(xy + "gar ini y; gar ini !y;"));
    EXPECT_EQ(labels(r), (std::vector<std::string>{"gar ini y", "gar ini !y"}));
}

TEST(Core, RealizableSpecIsAnError) {
    try {
        unrealizable_core(checked(xy + "gar alw y <-> x;"));
        FAIL();
    } catch (const Realizable& e) {
        EXPECT_STREQ(e.what(), "specification is realizable");
    }
}

TEST(Core, JointlyNeededGuaranteesAreExhaustivelyMinimal) {
    // y0 must follow x, y1 must follow y0, and y1 must disagree with x in the
    // next step: only all three together are unrealizable.
    const std::string header =
        "spec J env boolean x; sys boolean y0; sys boolean y1; ";
    const std::vector<std::string> gars = {"gar g0: trans next(y0) <-> next(x);",
                                           "gar g1: trans next(y1) <-> next(y0);",
                                           "gar g2: trans next(y1) <-> !next(x);"};
    auto r = unrealizable_core(checked(header + gars[0] + gars[1] + gars[2]));
    EXPECT_EQ(r.core.size(), 3u);
    EXPECT_TRUE(r.minimal);
    for (unsigned mask = 0; mask < 7; ++mask)
        EXPECT_TRUE(oracle_realizable(header, gars, mask)) << mask;
    EXPECT_FALSE(oracle_realizable(header, gars, 7));
}

TEST(Core, PatternAndPastGuaranteesDropTogether) {
    auto r = unrealizable_core(checked(
        xy + "pattern stay(a) { var boolean w; ini !w; trans next(w) <-> (w | a); alwEv !w; }\n"
             "gar p: stay(y); gar q: alw PREV(!y) -> !y; gar r: ini y; gar s: alwEv x | !x;"));
    // p forbids y ever holding and r forces it initially; q is compatible
    // with either
    std::vector<std::string> got = labels(r);
    EXPECT_TRUE(r.minimal);
    EXPECT_EQ(got, (std::vector<std::string>{"p", "r"}));
}

TEST(Trivial, Examples) {
    auto f = find_trivial(checked(xy + "gar t: alw x | !x; asm f: ini x & !x; gar n: trans next(y) <-> x;"));
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].constraint.label, "t");
    EXPECT_EQ(f[0].verdict, Triviality::TriviallyTrue);
    EXPECT_EQ(f[1].constraint.label, "f");
    EXPECT_EQ(f[1].verdict, Triviality::TriviallyFalse);
}

TEST(Trivial, RelativeToValidEncodings) {
    auto f = find_trivial(checked("spec E sys {A, B, C} m; gar alw m = A | m = B | m = C; gar ini m != A;"));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].verdict, Triviality::TriviallyTrue);
    auto g = find_trivial(checked("spec E sys Int(0..4) i; gar ini i > 4;"));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].verdict, Triviality::TriviallyFalse);
}

TEST(Monitor, DeterministicAndComplete) {
    auto v = check_monitor(checked(xy + "monitor boolean m { ini !m; trans next(m) <-> x; }"), "m");
    EXPECT_TRUE(v.deterministic);
    EXPECT_TRUE(v.complete);
    EXPECT_FALSE(v.restricts_others);
    EXPECT_TRUE(v.witness.empty());
}

TEST(Monitor, NextAloneFollowsDefinitions) {
    // exactly one next value (true) for every state: deterministic and
    // complete under the quantifier definitions
    auto v = check_monitor(checked(xy + "monitor boolean m { ini !m; trans next(m); }"), "m");
    EXPECT_TRUE(v.deterministic);
    EXPECT_TRUE(v.complete);
}

TEST(Monitor, MissingInitialValueIsNondeterministic) {
    auto v = check_monitor(checked(xy + "monitor boolean m { trans next(m) <-> x; }"), "m");
    EXPECT_FALSE(v.deterministic);
    EXPECT_TRUE(v.complete);
    EXPECT_EQ(v.violation, "initial determinism");
    EXPECT_NE(v.witness.at("m"), v.witness.at("m'"));
}

TEST(Monitor, IncompleteStepHasWitness) {
    auto v = check_monitor(
        checked(xy + "monitor boolean m { ini !m; trans x -> next(m); trans x -> !next(m); }"), "m");
    EXPECT_FALSE(v.complete);
    EXPECT_FALSE(v.restricts_others);
    EXPECT_EQ(v.violation, "step completeness");
    EXPECT_TRUE(v.witness.at("x"));
}

TEST(Monitor, RestrictingOtherVariable) {
    auto v = check_monitor(checked(xy + "monitor boolean m { ini !m; trans next(m) <-> next(x); trans next(x); }"),
                           "m");
    EXPECT_TRUE(v.restricts_others);
    EXPECT_FALSE(v.complete);
    EXPECT_FALSE(v.witness.at("next(x)"));
}

TEST(Monitor, EnumMonitorWithPastOperator) {
    auto v = check_monitor(
        checked(xy + "monitor {LOW, HIGH, OFF} level { ini level = OFF; "
                     "trans (PREV(x) -> next(level) = HIGH) & (!PREV(x) -> next(level) = LOW); }"),
        "level");
    // the unused code of the two-bit encoding is excluded by validity
    EXPECT_TRUE(v.deterministic);
    EXPECT_TRUE(v.complete);
    // both constraints share one auxiliary for PREV(x)
    auto split = check_monitor(
        checked(xy + "monitor {LOW, HIGH, OFF} level { ini level = OFF; "
                     "trans PREV(x) -> next(level) = HIGH; trans !PREV(x) -> next(level) = LOW; }"),
        "level");
    EXPECT_TRUE(split.deterministic);
    EXPECT_TRUE(split.complete);
}

TEST(Monitor, UnknownName) {
    EXPECT_THROW(check_monitor(checked(xy + "gar alw y;"), "nope"), std::invalid_argument);
}

TEST(Monitor, AgreesWithEnumeration) {
    // random small monitors: explicit count of next values per assignment
    std::mt19937 rng(5);
    for (int n = 0; n < 100; ++n) {
        std::vector<std::string> atoms = {"x", "y", "next(x)", "next(y)", "m", "next(m)"};
        std::string body = support::random_formula(rng, atoms, 2);
        std::string text = xy + "monitor boolean m { ini !m; trans " + body + "; }";
        sema::CheckedSpec c;
        try {
            c = checked(text);
        } catch (const SpecError&) {
            continue; // e.g. nothing mentions next
        }
        auto v = check_monitor(c, "m");
        auto expr = syntax::parse_expression(body);
        bool complete = true, deterministic = true;
        for (unsigned a = 0; a < 32; ++a) {
            int count = 0;
            for (int m2 = 0; m2 < 2; ++m2)
                count += oracle::eval(*expr, [&](const std::string& name, bool primed) {
                    if (name == "m")
                        return primed ? m2 == 1 : (a & 1u) != 0;
                    unsigned bit = name == "x" ? 1 : 2;
                    return ((a >> (primed ? bit + 2 : bit)) & 1u) != 0;
                });
            complete = complete && count >= 1;
            deterministic = deterministic && count <= 1;
        }
        EXPECT_EQ(v.complete, complete) << body;
        EXPECT_EQ(v.deterministic, deterministic) << body;
    }
}
