#include "spectra/gr1/game.hpp"

#include <map>
#include <stdexcept>

namespace spectra::gr1 {

using namespace syntax;

namespace {

Bdd translate_at(bdd::Manager& m, const Expr& e,
                 const std::function<std::uint32_t(const std::string&)>& levels, bool primed) {
    return std::visit(
        [&](const auto& x) -> Bdd {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BoolConst>) {
                return m.constant(x.value);
            } else if constexpr (std::is_same_v<T, NameRef>) {
                return m.var(levels(x.name) + (primed ? 1 : 0));
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (x.op == UnaryOp::Next)
                    return translate_at(m, *x.operand, levels, true);
                if (x.op == UnaryOp::Not)
                    return !translate_at(m, *x.operand, levels, primed);
                throw std::invalid_argument("not a kernel expression");
            } else if constexpr (std::is_same_v<T, Binary>) {
                Bdd a = translate_at(m, *x.lhs, levels, primed);
                Bdd b = translate_at(m, *x.rhs, levels, primed);
                switch (x.op) {
                case BinaryOp::And: return a & b;
                case BinaryOp::Or: return a | b;
                case BinaryOp::Implies: return a.implies(b);
                case BinaryOp::Iff:
                case BinaryOp::Eq: return a.iff(b);
                case BinaryOp::Neq: return a ^ b;
                default: throw std::invalid_argument("not a kernel expression");
                }
            } else {
                throw std::invalid_argument("not a kernel expression");
            }
        },
        e.node);
}

std::string progress(std::size_t outer, std::size_t j, std::size_t m) {
    return " while solving (outer iteration " + std::to_string(outer) + ", justice guarantee " +
           std::to_string(j + 1) + " of " + std::to_string(m) + ")";
}

} // namespace

std::uint32_t Game::level(const std::string& name) const {
    for (std::size_t k = 0; k < env_vars.size(); ++k)
        if (env_vars[k] == name)
            return x[k];
    for (std::size_t k = 0; k < sys_vars.size(); ++k)
        if (sys_vars[k] == name)
            return y[k];
    throw std::invalid_argument("unknown kernel variable '" + name + "'");
}

Bdd translate(bdd::Manager& manager, const Expr& e,
              const std::function<std::uint32_t(const std::string&)>& levels) {
    return translate_at(manager, e, levels, false);
}

Game to_gr1(const lowering::KernelSpec& kernel, std::shared_ptr<bdd::Manager> manager) {
    Game g;
    g.manager = manager ? std::move(manager) : std::make_shared<bdd::Manager>();
    auto& m = *g.manager;
    g.env_vars = kernel.env_vars;
    g.sys_vars = kernel.sys_vars;
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < g.env_vars.size(); ++i, ++k) {
        g.x.push_back(2 * k);
        g.xp.push_back(2 * k + 1);
    }
    for (std::size_t i = 0; i < g.sys_vars.size(); ++i, ++k) {
        g.y.push_back(2 * k);
        g.yp.push_back(2 * k + 1);
    }
    m.ensure_vars(2 * k);
    g.x_cube = m.cube(g.x);
    g.y_cube = m.cube(g.y);
    g.xp_cube = m.cube(g.xp);
    g.yp_cube = m.cube(g.yp);

    std::map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < g.env_vars.size(); ++i)
        index[g.env_vars[i]] = g.x[i];
    for (std::size_t i = 0; i < g.sys_vars.size(); ++i)
        index[g.sys_vars[i]] = g.y[i];
    auto levels = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end())
            throw std::invalid_argument("unknown kernel variable '" + name + "'");
        return it->second;
    };
    try {
        for (const auto& c : kernel.assumptions)
            g.assumptions.push_back({c, translate(m, *c.expr, levels)});
        for (const auto& c : kernel.guarantees)
            g.guarantees.push_back({c, translate(m, *c.expr, levels)});
        assemble(g, std::vector<bool>(g.assumptions.size(), true),
                 std::vector<bool>(g.guarantees.size(), true));
    } catch (const bdd::NodeLimitExceeded& e) {
        throw ResourceError(std::string(e.what()) + " while building the game (" +
                            std::to_string(g.assumptions.size() + g.guarantees.size()) + " of " +
                            std::to_string(kernel.assumptions.size() + kernel.guarantees.size()) +
                            " constraints translated)");
    }
    return g;
}

void assemble(Game& g, const std::vector<bool>& keep_assumptions,
              const std::vector<bool>& keep_guarantees) {
    auto& m = *g.manager;
    g.theta_e = g.theta_s = g.rho_e = g.rho_s = m.bdd_true();
    g.je.clear();
    g.js.clear();
    for (std::size_t i = 0; i < g.assumptions.size(); ++i) {
        if (!keep_assumptions[i])
            continue;
        const auto& c = g.assumptions[i];
        switch (c.source.kind) {
        case ConstraintKind::Ini: g.theta_e &= c.bdd; break;
        case ConstraintKind::Trans: g.rho_e &= c.bdd; break;
        default: g.je.push_back(c.bdd); break;
        }
    }
    for (std::size_t i = 0; i < g.guarantees.size(); ++i) {
        if (!keep_guarantees[i])
            continue;
        const auto& c = g.guarantees[i];
        switch (c.source.kind) {
        case ConstraintKind::Ini: g.theta_s &= c.bdd; break;
        case ConstraintKind::Trans: g.rho_s &= c.bdd; break;
        default: g.js.push_back(c.bdd); break;
        }
    }
    if (g.je.empty())
        g.je.push_back(m.bdd_true());
    if (g.js.empty())
        g.js.push_back(m.bdd_true());
}

Bdd controllable_pre(const Game& g, const Bdd& v, const Bdd& extra_primed_cube) {
    auto& m = *g.manager;
    Bdd outputs = extra_primed_cube.valid() ? g.yp_cube & extra_primed_cube : g.yp_cube;
    Bdd can_answer = m.and_exists(g.rho_s, m.rename_prime(v), outputs);
    return !m.and_exists(g.rho_e, !can_answer, g.xp_cube);
}

bool initially_winning(const Game& g, const Bdd& z) {
    auto& m = *g.manager;
    Bdd ok = g.theta_e.implies(m.exists(g.theta_s & z, g.y_cube));
    return m.forall(ok, g.x_cube).is_true();
}

Solution solve(const Game& g) {
    auto& m = *g.manager;
    const std::size_t jn = g.js.size();
    Solution sol;
    sol.memo.y.assign(jn, {});
    sol.memo.x.assign(jn, {});
    std::size_t outer = 0, current_j = 0;
    try {
        Bdd z = m.bdd_true();
        for (bool changed = true; changed; ++outer) {
            changed = false;
            for (std::size_t j = 0; j < jn; ++j) {
                current_j = j;
                std::vector<Bdd> chain;
                std::vector<std::vector<Bdd>> xs;
                const Bdd goal = g.js[j] & controllable_pre(g, z);
                Bdd y = m.bdd_false();
                for (;;) {
                    const Bdd start = goal | controllable_pre(g, y);
                    Bdd next_y = m.bdd_false();
                    std::vector<Bdd> row;
                    for (const Bdd& je : g.je) {
                        Bdd x = z;
                        for (;;) {
                            Bdd next_x = start | ((!je) & controllable_pre(g, x));
                            if (next_x == x)
                                break;
                            x = std::move(next_x);
                        }
                        next_y |= x;
                        row.push_back(std::move(x));
                    }
                    if (next_y == y)
                        break;
                    y = next_y;
                    chain.push_back(std::move(next_y));
                    xs.push_back(std::move(row));
                }
                if (y != z) {
                    changed = true;
                    z = y;
                }
                sol.memo.y[j] = std::move(chain);
                sol.memo.x[j] = std::move(xs);
            }
        }
        sol.memo.z = z;
        sol.realizable = initially_winning(g, z);
    } catch (const bdd::NodeLimitExceeded& e) {
        throw ResourceError(e.what() + progress(outer, current_j, jn));
    }
    return sol;
}

} // namespace spectra::gr1
