#include "spectra/analysis/analyses.hpp"

#include "spectra/gr1/game.hpp"
#include "spectra/lowering/passes.hpp"
#include "spectra/syntax/printer.hpp"

#include <algorithm>
#include <set>

namespace spectra::analysis {

using gr1::Bdd;
using syntax::ConstraintKind;
using syntax::OriginKind;
using syntax::Role;

std::vector<SourceConstraint> source_constraints(const syntax::SpecAst& spec) {
    std::vector<SourceConstraint> out;
    for (std::size_t i = 0; i < spec.elements.size(); ++i) {
        const auto* c = std::get_if<syntax::Constraint>(&spec.elements[i].node);
        if (!c)
            continue;
        SourceConstraint s;
        s.element = i;
        s.role = c->role;
        s.name = c->name.value_or("");
        s.label = c->name ? *c->name
                          : std::string(c->role == Role::Assumption ? "asm " : "gar ") +
                                syntax::print(c->body);
        s.span = spec.elements[i].span;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> monitor_names(const syntax::SpecAst& spec) {
    std::vector<std::string> out;
    for (const auto& el : spec.elements)
        if (const auto* m = std::get_if<syntax::Monitor>(&el.node))
            out.push_back(m->name);
    return out;
}

// ------------------------------------------------------------------ core

namespace {

class CoreSearch {
public:
    CoreSearch(const sema::CheckedSpec& checked)
        : kernel_(lowering::lower(checked)), game_(gr1::to_gr1(kernel_)) {
        for (auto& s : source_constraints(checked.ast))
            if (s.role == Role::Guarantee)
                candidates_.push_back(std::move(s));
    }

    // Unrealizable with only the candidate guarantees in `subset`?
    bool unrealizable(const std::vector<std::size_t>& subset) {
        std::set<std::size_t> elements;
        for (auto i : subset)
            elements.insert(candidates_[i].element);
        std::set<std::size_t> all;
        for (const auto& c : candidates_)
            all.insert(c.element);
        std::vector<bool> keep;
        for (const auto& g : game_.guarantees) {
            std::size_t e = g.source.origin.element;
            // monitor, validity, and assumption-side pattern guarantees stay
            keep.push_back(!all.count(e) || elements.count(e));
        }
        gr1::assemble(game_, std::vector<bool>(game_.assumptions.size(), true), keep);
        ++checks_;
        return !gr1::solve(game_).realizable;
    }

    std::vector<std::size_t> ddmin() {
        std::vector<std::size_t> c(candidates_.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = i;
        if (!unrealizable(c))
            throw Realizable();
        if (unrealizable({}))
            return {};
        std::size_t n = 2;
        while (c.size() >= 2) {
            auto chunks = split(c, n);
            bool reduced = false;
            for (const auto& chunk : chunks) {
                if (unrealizable(chunk)) {
                    c = chunk;
                    n = 2;
                    reduced = true;
                    break;
                }
            }
            if (!reduced && n > 2) {
                for (const auto& chunk : chunks) {
                    auto rest = minus(c, chunk);
                    if (unrealizable(rest)) {
                        c = rest;
                        n = std::max<std::size_t>(n - 1, 2);
                        reduced = true;
                        break;
                    }
                }
            }
            if (reduced)
                continue;
            if (n >= c.size())
                break;
            n = std::min(2 * n, c.size());
        }
        return c;
    }

    CoreReport report() {
        CoreReport r;
        auto core = ddmin();
        r.minimal = true;
        for (std::size_t k = 0; k < core.size(); ++k) {
            auto rest = core;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            if (unrealizable(rest))
                r.minimal = false;
        }
        for (auto i : core)
            r.core.push_back(candidates_[i]);
        r.checks = checks_;
        return r;
    }

private:
    lowering::KernelSpec kernel_;
    gr1::Game game_;
    std::vector<SourceConstraint> candidates_;
    std::size_t checks_ = 0;

    static std::vector<std::vector<std::size_t>> split(const std::vector<std::size_t>& c, std::size_t n) {
        std::vector<std::vector<std::size_t>> out;
        std::size_t start = 0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t end = start + (c.size() - start) / (n - k);
            out.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(start),
                             c.begin() + static_cast<std::ptrdiff_t>(end));
            start = end;
        }
        return out;
    }

    static std::vector<std::size_t> minus(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
        std::vector<std::size_t> out;
        for (auto x : a)
            if (std::find(b.begin(), b.end(), x) == b.end())
                out.push_back(x);
        return out;
    }
};

} // namespace

CoreReport unrealizable_core(const sema::CheckedSpec& checked) { return CoreSearch(checked).report(); }

// --------------------------------------------------------------- trivial

std::vector<TrivialFinding> find_trivial(const sema::CheckedSpec& checked) {
    auto kernel = lowering::lower(checked);
    auto game = gr1::to_gr1(kernel);
    auto& m = *game.manager;

    Bdd valid_now = m.bdd_true(), valid_next = m.bdd_true();
    auto all = game.assumptions;
    all.insert(all.end(), game.guarantees.begin(), game.guarantees.end());
    for (const auto& c : all) {
        if (c.source.origin.kind != OriginKind::Validity)
            continue;
        if (c.source.kind == ConstraintKind::Ini)
            valid_now &= c.bdd;
        else
            valid_next &= c.bdd;
    }

    std::vector<TrivialFinding> out;
    for (const auto& s : source_constraints(checked.ast)) {
        bool any = false, always = true, never = false;
        for (const auto& c : all) {
            if (c.source.origin.element != s.element || c.source.origin.kind != OriginKind::Source)
                continue;
            any = true;
            Bdd domain = c.source.kind == ConstraintKind::Trans ? valid_now & valid_next : valid_now;
            always = always && domain.implies(c.bdd).is_true();
            never = never || (domain & c.bdd).is_false();
        }
        if (!any)
            continue;
        if (never)
            out.push_back({s, Triviality::TriviallyFalse});
        else if (always)
            out.push_back({s, Triviality::TriviallyTrue});
    }
    return out;
}

// --------------------------------------------------------------- monitors

MonitorVerdict check_monitor(const sema::CheckedSpec& checked, const std::string& monitor) {
    std::size_t idx = checked.ast.elements.size();
    for (std::size_t i = 0; i < checked.ast.elements.size(); ++i)
        if (const auto* mon = std::get_if<syntax::Monitor>(&checked.ast.elements[i].node);
            mon && mon->name == monitor)
            idx = i;
    if (idx == checked.ast.elements.size())
        throw std::invalid_argument("unknown monitor '" + monitor + "'");

    auto kernel = lowering::lower(checked);
    auto game = gr1::to_gr1(kernel);
    auto& m = *game.manager;

    std::vector<std::uint32_t> v, vp;
    for (const auto& info : kernel.variables) {
        if (info.origin.element != idx)
            continue;
        if (info.source != lowering::VarInfo::Source::Monitor &&
            info.source != lowering::VarInfo::Source::PastAux)
            continue;
        for (const auto& b : info.bits) {
            v.push_back(game.level(b));
            vp.push_back(game.level(b) + 1);
        }
    }
    Bdd ini = m.bdd_true(), trans = m.bdd_true();
    for (const auto& g : game.guarantees) {
        if (g.source.origin.element != idx)
            continue;
        if (g.source.kind == ConstraintKind::Ini)
            ini &= g.bdd;
        else if (g.source.kind == ConstraintKind::Trans)
            trans &= g.bdd;
    }

    const std::uint32_t base = m.var_count();
    m.ensure_vars(base + static_cast<std::uint32_t>(v.size()));
    std::vector<std::string> names = game.env_vars;
    names.insert(names.end(), game.sys_vars.begin(), game.sys_vars.end());
    auto name_of = [&](std::uint32_t level, bool second_of_primed) -> std::string {
        if (level >= base) {
            const std::string bit = names[v[level - base] / 2];
            return second_of_primed ? "next(" + bit + ")'" : bit + "'";
        }
        const std::string bit = names[level / 2];
        return level % 2 ? "next(" + bit + ")" : bit;
    };

    MonitorVerdict out;
    auto record = [&](const char* what, const Bdd& set, bool primed) {
        if (!out.violation.empty())
            return;
        out.violation = what;
        auto levels = m.support(set);
        auto sat = m.sat_one(set, levels);
        for (std::size_t i = 0; i < levels.size(); ++i)
            out.witness[name_of(levels[i], primed)] = (*sat)[i];
    };
    auto duplicate = [&](const Bdd& f, const std::vector<std::uint32_t>& vars) {
        std::vector<std::uint32_t> map(m.var_count());
        for (std::uint32_t l = 0; l < map.size(); ++l)
            map[l] = l;
        Bdd differ = m.bdd_false();
        for (std::size_t i = 0; i < vars.size(); ++i) {
            map[vars[i]] = base + static_cast<std::uint32_t>(i);
            differ |= m.var(vars[i]) ^ m.var(base + static_cast<std::uint32_t>(i));
        }
        return f & m.rename(f, map) & differ;
    };

    // initial values
    Bdd missing = !m.exists(ini, m.cube(v));
    if (!missing.is_false()) {
        out.complete = false;
        out.restricts_others = !m.support(missing).empty();
        record("initial completeness", missing, false);
    }
    Bdd twice = duplicate(ini, v);
    if (!twice.is_false()) {
        out.deterministic = false;
        record("initial determinism", twice, false);
    }
    // steps
    missing = !m.exists(trans, m.cube(vp));
    if (!missing.is_false()) {
        out.complete = false;
        for (auto l : m.support(missing))
            if (l % 2 == 1)
                out.restricts_others = true;
        record("step completeness", missing, true);
    }
    twice = duplicate(trans, vp);
    if (!twice.is_false()) {
        out.deterministic = false;
        record("step determinism", twice, true);
    }
    return out;
}

} // namespace spectra::analysis
