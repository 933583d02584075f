#pragma once

// Helpers shared by the test binaries: random kernel specifications and
// explicit closed-loop graphs of concrete controllers.

#include "spectra/gr1/game.hpp"
#include "spectra/lowering/passes.hpp"
#include "spectra/oracle/oracle.hpp"
#include "spectra/sema/check.hpp"
#include "spectra/syntax/parser.hpp"
#include "spectra/syntax/printer.hpp"

#include <fstream>
#include <map>
#include <stdexcept>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace spectra::support {

inline lowering::KernelSpec lower_text(const std::string& text, const std::string& file = "t.spectra") {
    return lowering::lower(sema::check(syntax::parse(text, file)));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string random_formula(std::mt19937& rng, const std::vector<std::string>& atoms, int depth) {
    if (atoms.empty())
        return rng() % 2 ? "true" : "false";
    if (depth == 0 || rng() % 3 == 0) {
        std::string a = atoms[rng() % atoms.size()];
        return rng() % 3 == 0 ? "!" + a : a;
    }
    static const char* ops[] = {" & ", " | ", " -> ", " <-> "};
    return "(" + random_formula(rng, atoms, depth - 1) + ops[rng() % 4] +
           random_formula(rng, atoms, depth - 1) + ")";
}

/// Random GR(1) specification with 1..3 env and 1..3 sys booleans.
inline std::string random_spec(std::mt19937& rng, unsigned max_env = 3, unsigned max_sys = 3) {
    const unsigned nx = 1 + rng() % max_env, ny = 1 + rng() % max_sys;
    std::vector<std::string> xs, ys, xps, yps;
    std::string text = "spec Random\n";
    for (unsigned i = 0; i < nx; ++i) {
        xs.push_back("x" + std::to_string(i));
        xps.push_back("next(x" + std::to_string(i) + ")");
        text += "env boolean x" + std::to_string(i) + ";\n";
    }
    for (unsigned i = 0; i < ny; ++i) {
        ys.push_back("y" + std::to_string(i));
        yps.push_back("next(y" + std::to_string(i) + ")");
        text += "sys boolean y" + std::to_string(i) + ";\n";
    }
    auto cat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    const auto state = cat(xs, ys);
    if (rng() % 3 == 0)
        text += "asm ini " + random_formula(rng, xs, 2) + ";\n";
    for (unsigned i = rng() % 2; i > 0; --i)
        text += "asm trans " + random_formula(rng, cat(state, xps), 2) + ";\n";
    for (unsigned i = rng() % 2; i > 0; --i)
        text += "asm alwEv " + random_formula(rng, state, 1) + ";\n";
    if (rng() % 2 == 0)
        text += "gar ini " + random_formula(rng, state, 2) + ";\n";
    for (unsigned i = 1 + rng() % 2; i > 0; --i)
        text += "gar trans " + random_formula(rng, cat(cat(state, xps), yps), 2) + ";\n";
    for (unsigned i = rng() % 3; i > 0; --i)
        text += "gar alwEv " + random_formula(rng, state, 1) + ";\n";
    return text;
}

/// Assignment vector indexed by level for a controller state.
inline std::vector<bool> by_level(const gr1::SymbolicController& c, const std::vector<bool>& state,
                                  bool primed = false) {
    std::vector<bool> a(c.manager->var_count(), false);
    auto levels = c.x_levels();
    auto yl = c.y_levels(), ml = c.m_levels();
    levels.insert(levels.end(), yl.begin(), yl.end());
    levels.insert(levels.end(), ml.begin(), ml.end());
    for (std::size_t i = 0; i < levels.size(); ++i)
        a[levels[i] + (primed ? 1 : 0)] = state[i];
    return a;
}

/// Closed-loop graph of a concrete controller with justice labels taken
/// from the game.
inline oracle::Graph closed_loop(const gr1::Game& g, const gr1::SymbolicController& c,
                                 const gr1::ConcreteController& cc) {
    oracle::Graph graph;
    for (const auto& [x, id] : cc.initial)
        graph.initial.push_back(id);
    for (const auto& succ : cc.successors) {
        graph.succ.emplace_back();
        for (const auto& [x2, id] : succ)
            graph.succ.back().push_back(id);
    }
    auto label = [&](const std::vector<gr1::Bdd>& sets) {
        std::vector<std::vector<bool>> out;
        for (const auto& s : sets) {
            out.emplace_back();
            for (const auto& st : cc.states)
                out.back().push_back(g.manager->eval(s, by_level(c, st)));
        }
        return out;
    };
    graph.env_justice = label(g.je);
    graph.sys_justice = label(g.js);
    return graph;
}

/// Random formula over a, b, c with past-time operators.
inline syntax::ExprPtr random_past(std::mt19937& rng, int depth) {
    static const char* vars[] = {"a", "b", "c"};
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 9);
    int k = pick(rng);
    if (k == 0)
        return syntax::make_name(vars[rng() % 3]);
    if (k == 1)
        return syntax::make_bool(rng() % 2);
    auto sub = [&] { return random_past(rng, depth - 1); };
    switch (k) {
    case 2: return syntax::make_unary(syntax::UnaryOp::Not, sub());
    case 3: return syntax::make_unary(syntax::UnaryOp::Prev, sub());
    case 4: return syntax::make_unary(syntax::UnaryOp::Once, sub());
    case 5: return syntax::make_unary(syntax::UnaryOp::Historically, sub());
    case 6: return syntax::make_binary(syntax::BinaryOp::Since, sub(), sub());
    case 7: return syntax::make_binary(syntax::BinaryOp::And, sub(), sub());
    case 8: return syntax::make_binary(syntax::BinaryOp::Or, sub(), sub());
    default: return syntax::make_binary(syntax::BinaryOp::Iff, sub(), sub());
    }
}

/// Values of the system variables forced by the guarantees along the env
/// trace. The lowered spec defines every sys variable deterministically, so
/// exactly one assignment fits at each step.
inline std::vector<std::map<std::string, bool>> run_guarantees(const lowering::KernelSpec& k,
                                                               const std::vector<std::map<std::string, bool>>& env) {
    std::vector<std::map<std::string, bool>> out;
    const std::size_t ny = k.sys_vars.size();
    for (std::size_t i = 0; i < env.size(); ++i) {
        std::vector<std::map<std::string, bool>> fits;
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << ny); ++y) {
            auto cur = env[i];
            for (std::size_t b = 0; b < ny; ++b)
                cur[k.sys_vars[b]] = (y >> b) & 1u;
            bool ok = true;
            for (const auto& c : k.guarantees) {
                if (c.kind == syntax::ConstraintKind::Ini && i == 0)
                    ok = ok && oracle::eval(*c.expr, [&](const std::string& n, bool) { return cur.at(n); });
                if (c.kind == syntax::ConstraintKind::Trans && i > 0)
                    ok = ok && oracle::eval(*c.expr, [&](const std::string& n, bool primed) {
                        return primed ? cur.at(n) : out[i - 1].at(n);
                    });
            }
            if (ok)
                fits.push_back(cur);
        }
        if (fits.size() != 1)
            throw std::runtime_error("guarantees do not determine the system variables");
        out.push_back(fits[0]);
    }
    return out;
}

} // namespace spectra::support
