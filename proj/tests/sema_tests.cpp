#include "spectra/sema/check.hpp"
#include "spectra/sema/imports.hpp"
#include "spectra/syntax/parser.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace spectra;
using namespace spectra::sema;

namespace {

CheckedSpec ok(const std::string& text) { return check(syntax::parse(text, "t.spectra")); }

// First diagnostic message of a rejected spec, or "" if it was accepted.
std::string first_error(const std::string& text) {
    try {
        ok(text);
    } catch (const SpecError& e) {
        return e.diagnostics().front().message;
    }
    return "";
}

bool rejects(const std::string& text, const std::string& fragment) {
    std::string m = first_error(text);
    return !m.empty() && m.find(fragment) != std::string::npos;
}

const std::string vars = "spec T env boolean x; sys boolean y; ";

} // namespace

TEST(Check, InitialAssumptionCannotMentionSystem) {
    EXPECT_TRUE(rejects(vars + "asm ini y;", "initial assumption cannot reference system"));
}

TEST(Check, NestedNext) {
    EXPECT_TRUE(rejects(vars + "gar trans next(next(y));", "nested"));
}

TEST(Check, NextThroughDefine) {
    EXPECT_TRUE(rejects(vars + "define ny := next(y); gar trans next(ny);", "nested"));
    EXPECT_TRUE(rejects(vars + "define ny := next(y); gar alw ny;", "alw"));
}

TEST(Check, SafetyAssumptionUnderNext) {
    EXPECT_TRUE(rejects(vars + "asm trans next(y) | x;", "inside next"));
    EXPECT_EQ(first_error(vars + "asm trans y -> next(x);"), "");
}

TEST(Check, AlwInAssumptionCannotMentionSystem) {
    EXPECT_TRUE(rejects(vars + "asm alw x | y;", "state invariant"));
}

TEST(Check, PatternNeedsExactlyOneJustice) {
    EXPECT_TRUE(rejects(vars + "pattern p(a) { alwEv a; alwEv !a; } gar p(x);", "exactly one"));
    EXPECT_TRUE(rejects(vars + "pattern p(a) { ini a; } gar p(x);", "exactly one"));
}

TEST(Check, EnumEqualityIsBoolean) {
    auto c = ok("spec T sys {FWD, STOP, BWD} v; gar ini v = FWD;");
    const auto& g = std::get<syntax::Constraint>(c.ast.elements[1].node);
    EXPECT_TRUE(c.types.at(g.body.expr.get()).is_bool());
    EXPECT_TRUE(rejects("spec T sys {FWD, STOP, BWD} v; gar ini v < FWD;", "only be compared"));
}

TEST(Check, IntervalArithmetic) {
    auto c = ok("spec T sys Int(0..50) speed; gar ini speed + 1 > 3;");
    auto e = syntax::parse_expression("speed + 1");
    EXPECT_EQ(type_of(*e, c.symbols), SemType::integer(1, 51));
    EXPECT_EQ(type_of(*syntax::parse_expression("speed * -2 - 1"), c.symbols),
              SemType::integer(-101, -1));
    EXPECT_EQ(type_of(*syntax::parse_expression("speed / 7"), c.symbols), SemType::integer(0, 7));
    EXPECT_EQ(type_of(*syntax::parse_expression("speed mod 7"), c.symbols),
              SemType::integer(0, 6));
    EXPECT_TRUE(type_of(*syntax::parse_expression("true & false"), c.symbols).is_bool());
}

TEST(Check, EnumVersusIntIsATypeError) {
    EXPECT_TRUE(rejects("spec T sys {FWD, STOP} v; gar ini FWD = 3;", "cannot compare"));
}

TEST(Check, NonConstantDivisor) {
    EXPECT_TRUE(rejects("spec T sys Int(0..3) a; sys Int(1..3) b; gar ini a / b = 1;",
                        "constant"));
    EXPECT_TRUE(rejects("spec T sys Int(0..3) a; gar ini a mod 0 = 1;", "zero"));
}

TEST(Check, IntRangeOrder) {
    EXPECT_TRUE(rejects("spec T sys Int(3..3) a; gar ini a = 3;", "upper bound"));
}

TEST(Check, DuplicateNames) {
    EXPECT_TRUE(rejects(vars + "sys boolean x;", "duplicate"));
    EXPECT_TRUE(rejects(vars + "gar x: ini y;", "duplicate"));
    EXPECT_TRUE(rejects("spec T sys {A, B} v; sys {B, C} w;", "clashes"));
}

TEST(Check, SharedInlineEnum) {
    EXPECT_EQ(first_error("spec T sys {A, B} v; sys {A, B} w; gar ini v = w;"), "");
}

TEST(Check, PredicateRecursion) {
    EXPECT_TRUE(rejects(vars + "predicate p(boolean a) { q(a) } predicate q(boolean a) { p(a) }",
                        "instantiates itself"));
}

TEST(Check, PredicateArityAndTypes) {
    std::string base = "spec T sys {A, B} v; env boolean x; predicate p(boolean a, {A, B} b) { a & b = A } ";
    EXPECT_EQ(first_error(base + "gar ini p(x, v);"), "");
    EXPECT_TRUE(rejects(base + "gar ini p(x);", "expects 2"));
    EXPECT_TRUE(rejects(base + "gar ini p(v, x);", "argument 1"));
}

TEST(Check, PredicateArgumentsRespectAssumptionRules) {
    std::string base = vars + "predicate p(boolean a) { a } ";
    EXPECT_TRUE(rejects(base + "asm ini p(y);", "initial assumption"));
    EXPECT_EQ(first_error(base + "asm ini p(x);"), "");
}

TEST(Check, PatternInstancePosition) {
    std::string base = vars + "pattern p(a) { alwEv a; } ";
    EXPECT_EQ(first_error(base + "gar p(y);"), "");
    EXPECT_TRUE(rejects(base + "gar alwEv p(y) & y;", "entire expression"));
    EXPECT_TRUE(rejects(base + "gar p(next(y));", "next"));
}

TEST(Check, PatternBodyScope) {
    EXPECT_TRUE(rejects(vars + "pattern p(a) { alwEv a & x; } gar p(y);", "pattern bodies"));
    EXPECT_TRUE(rejects(vars + "pattern p(a) { var boolean w; trans next(a) -> w; alwEv w; } gar p(y);",
                        "pattern variables"));
}

TEST(Check, MonitorRules) {
    EXPECT_TRUE(rejects(vars + "monitor boolean m { alwEv m; }", "justice"));
    EXPECT_TRUE(rejects(vars + "monitor boolean m { ini next(m); }", "initial"));
    EXPECT_EQ(first_error(vars + "monitor boolean m { ini !m; trans next(m) <-> x; } gar alwEv m;"),
              "");
}

TEST(Check, PastOperatorsNeedBooleans) {
    EXPECT_TRUE(rejects("spec T sys Int(0..3) a; gar alw Y a;", "boolean"));
    EXPECT_TRUE(rejects(vars + "gar trans Y next(y);", "past"));
}

TEST(Check, MissingTemporalKeyword) {
    EXPECT_TRUE(rejects(vars + "gar y;", "missing temporal"));
}

TEST(Check, DiagnosticsAreDeterministic) {
    std::string bad = vars + "asm ini y; gar trans next(next(y)); gar ini z;";
    std::vector<std::string> a, b;
    for (auto* out : {&a, &b}) {
        try {
            ok(bad);
        } catch (const SpecError& e) {
            for (const auto& d : e.diagnostics())
                out->push_back(format(d));
        }
    }
    EXPECT_EQ(a.size(), 3u);
    EXPECT_EQ(a, b);
}

TEST(Imports, CopiesReferencedPatternOnly) {
    std::map<std::string, std::string> files = {
        {"dir/main.spectra",
         "import \"lib.spectra\"; spec M env boolean x; sys boolean y; gar resp(x, y);"},
        {"dir/lib.spectra",
         "spec L pattern resp(s, p) { var boolean w; ini !w; trans next(w) <-> ((w | s) & !p); "
         "alwEv !w; } pattern unused(a) { alwEv a; } predicate helper(boolean a) { !a }"},
    };
    FileLoader loader = [&](const std::string& p) -> std::optional<std::string> {
        auto it = files.find(p);
        if (it == files.end())
            return std::nullopt;
        return it->second;
    };
    auto ast = resolve_imports("dir/main.spectra", loader);
    EXPECT_TRUE(ast.imports.empty());
    ASSERT_EQ(ast.elements.size(), 4u);
    EXPECT_EQ(syntax::element_name(ast.elements.back()), "resp");
    EXPECT_NO_THROW(check(ast));
}

TEST(Imports, NoImportsIsIdentity) {
    auto a = syntax::parse(vars + "gar ini y;");
    auto b = resolve_imports(a, "x.spectra", filesystem_loader());
    EXPECT_TRUE(syntax::equal(a, b));
}

TEST(Imports, CycleIsAnError) {
    std::map<std::string, std::string> files = {
        {"a.spectra", "import \"b.spectra\"; spec A sys boolean y; gar ini y;"},
        {"b.spectra", "import \"a.spectra\"; spec B predicate p(boolean a) { a }"},
    };
    FileLoader loader = [&](const std::string& p) -> std::optional<std::string> {
        auto it = files.find(p);
        return it == files.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    try {
        resolve_imports("a.spectra", loader);
        FAIL();
    } catch (const SpecError& e) {
        EXPECT_NE(e.diagnostics()[0].message.find("cycle"), std::string::npos);
    }
}

TEST(Imports, ImportedPredicateMayNotUseForeignNames) {
    std::map<std::string, std::string> files = {
        {"a.spectra", "import \"b.spectra\"; spec A sys boolean y; gar ini p(y);"},
        {"b.spectra", "spec B env boolean g; predicate p(boolean a) { a & g }"},
    };
    FileLoader loader = [&](const std::string& p) -> std::optional<std::string> {
        auto it = files.find(p);
        return it == files.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    EXPECT_THROW(resolve_imports("a.spectra", loader), SpecError);
    files["c.spectra"] = "import \"missing.spectra\"; spec C sys boolean y; gar ini y;";
    EXPECT_THROW(resolve_imports("c.spectra", loader), SpecError);
}
