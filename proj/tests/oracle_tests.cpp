#include "spectra/lowering/passes.hpp"
#include "spectra/oracle/oracle.hpp"
#include "spectra/sema/check.hpp"
#include "spectra/syntax/parser.hpp"

#include <gtest/gtest.h>

using namespace spectra;
using namespace spectra::oracle;

namespace {

lowering::KernelSpec kernel(const std::string& text) {
    return lowering::lower(sema::check(syntax::parse(text, "t.spectra")));
}

bool realizable(const std::string& text) { return solve_explicit(kernel(text)); }

const std::string xy = "spec T env boolean x; sys boolean y; ";

} // namespace

TEST(Oracle, KnownVerdicts) {
    EXPECT_TRUE(realizable(xy + "gar alw y <-> x;"));
    EXPECT_FALSE(realizable(xy + "gar trans y <-> next(x);"));
    EXPECT_TRUE(realizable(xy + "asm alwEv x; gar alwEv x & y;"));
    EXPECT_FALSE(realizable(xy + "gar alwEv x & y;"));
    EXPECT_TRUE(realizable(xy));
}

TEST(Oracle, InitialChoiceMatters) {
    EXPECT_FALSE(realizable(xy + "gar ini y <-> !y;"));
    // env may pick any x initially; y must match it
    EXPECT_TRUE(realizable(xy + "gar ini y <-> x;"));
    // an unsatisfiable initial assumption makes everything realizable
    EXPECT_TRUE(realizable(xy + "asm ini x & !x; gar ini false;"));
}

TEST(Oracle, DeadlockingEnvironmentLoses) {
    // env has no successor at all; the system wins vacuously
    EXPECT_TRUE(realizable(xy + "asm trans next(x) & !next(x); gar alwEv false;"));
    // env can always move, so the unreachable goal loses
    EXPECT_FALSE(realizable(xy + "asm trans !next(x); gar alwEv false;"));
}

TEST(Oracle, RejectsLargeGames) {
    std::string text = "spec Big";
    for (int i = 0; i < 13; ++i)
        text += " env boolean e" + std::to_string(i) + ";";
    EXPECT_THROW(ExplicitGame{kernel(text)}, std::length_error);
}

TEST(Oracle, TransitionTables) {
    ExplicitGame g(kernel(xy + "asm trans next(x) <-> !x; gar trans next(y) <-> (x & next(x));"));
    ASSERT_EQ(g.nx(), 1u);
    ASSERT_EQ(g.ny(), 1u);
    for (std::uint32_t s = 0; s < 4; ++s)
        for (std::uint32_t x2 = 0; x2 < 2; ++x2) {
            EXPECT_EQ(g.env_trans(s, x2), x2 != g.env_part(s));
            for (std::uint32_t y2 = 0; y2 < 2; ++y2)
                EXPECT_EQ(g.sys_trans(s, x2, y2), bool(y2) == (g.env_part(s) && x2));
        }
}

TEST(Oracle, PastSemanticsByHand) {
    Trace t;
    for (bool a : {false, true, false, false})
        t.states.push_back({{"a", a}, {"b", !a}});
    auto f = [](const char* s) { return syntax::parse_expression(s); };
    EXPECT_FALSE(eval_pastltl(*f("Y a"), t, 0));
    EXPECT_TRUE(eval_pastltl(*f("Y a"), t, 2));
    EXPECT_FALSE(eval_pastltl(*f("O a"), t, 0));
    EXPECT_TRUE(eval_pastltl(*f("O a"), t, 3));
    EXPECT_TRUE(eval_pastltl(*f("H b"), t, 0));
    EXPECT_FALSE(eval_pastltl(*f("H b"), t, 1));
    EXPECT_TRUE(eval_pastltl(*f("b S a"), t, 3));
    EXPECT_FALSE(eval_pastltl(*f("a S b"), t, 1) == false);
    EXPECT_FALSE(eval_pastltl(*f("false S a"), t, 2));
}

TEST(Oracle, UnfairCycleFound) {
    // 0 -> 1 -> 0 loop never visits the sys goal at 2
    Graph g;
    g.succ = {{1}, {0, 2}, {2}};
    g.initial = {0};
    g.env_justice = {{true, true, true}};
    g.sys_justice = {{false, false, true}};
    auto c = find_unfair_cycle(g);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->justice, 0u);
    EXPECT_EQ(c->component.size(), 2u);
}

TEST(Oracle, CycleExcusedByEnvironment) {
    Graph g;
    g.succ = {{1}, {0}};
    g.initial = {0};
    g.env_justice = {{false, false}};
    g.sys_justice = {{false, false}};
    EXPECT_FALSE(find_unfair_cycle(g));
    g.env_justice = {{false, true}};
    EXPECT_TRUE(find_unfair_cycle(g));
}

TEST(Oracle, UnreachableCycleIgnored) {
    Graph g;
    g.succ = {{0}, {2}, {1}};
    g.initial = {0};
    g.env_justice = {{true, true, true}};
    g.sys_justice = {{true, false, false}};
    EXPECT_FALSE(find_unfair_cycle(g));
}
