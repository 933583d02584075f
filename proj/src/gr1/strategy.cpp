#include "spectra/gr1/game.hpp"

#include <map>
#include <queue>
#include <stdexcept>

namespace spectra::gr1 {

namespace {

std::uint32_t bits_for(std::size_t m) {
    std::uint32_t b = 0;
    while ((std::size_t{1} << b) < m)
        ++b;
    return b;
}

void all_sat_rec(bdd::Manager& m, const Bdd& f, const std::vector<std::uint32_t>& levels,
                 std::size_t k, std::vector<bool>& cur, std::size_t cap,
                 std::vector<std::vector<bool>>& out) {
    if (out.size() >= cap || f.is_false())
        return;
    if (k == levels.size()) {
        if (!f.is_true())
            throw std::invalid_argument("all_sat: levels do not cover the support");
        out.push_back(cur);
        return;
    }
    for (bool v : {false, true}) {
        cur[k] = v;
        all_sat_rec(m, m.restrict(f, m.literal_cube({{levels[k], v}})), levels, k + 1, cur, cap, out);
    }
}

std::vector<std::pair<std::uint32_t, bool>> literals(const std::vector<std::uint32_t>& levels,
                                                     const std::vector<bool>& values,
                                                     std::uint32_t shift = 0) {
    std::vector<std::pair<std::uint32_t, bool>> out;
    for (std::size_t i = 0; i < levels.size(); ++i)
        out.emplace_back(levels[i] + shift, values[i]);
    return out;
}

} // namespace

std::vector<std::vector<bool>> all_sat(bdd::Manager& manager, const Bdd& f,
                                       const std::vector<std::uint32_t>& levels, std::size_t cap) {
    std::vector<std::vector<bool>> out;
    std::vector<bool> cur(levels.size());
    all_sat_rec(manager, f, levels, 0, cur, cap, out);
    return out;
}

std::vector<std::uint32_t> SymbolicController::x_levels() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t k = 0; k < env_vars.size(); ++k)
        out.push_back(2 * k);
    return out;
}

std::vector<std::uint32_t> SymbolicController::y_levels() const {
    std::vector<std::uint32_t> out;
    const auto nx = static_cast<std::uint32_t>(env_vars.size());
    for (std::uint32_t k = 0; k < sys_vars.size(); ++k)
        out.push_back(2 * (nx + k));
    return out;
}

std::vector<std::uint32_t> SymbolicController::m_levels() const {
    std::vector<std::uint32_t> out;
    const auto n = static_cast<std::uint32_t>(env_vars.size() + sys_vars.size());
    for (std::uint32_t b = 0; b < memory_bits; ++b)
        out.push_back(2 * (n + b));
    return out;
}

std::uint32_t SymbolicController::level(const std::string& name) const {
    for (std::uint32_t k = 0; k < env_vars.size(); ++k)
        if (env_vars[k] == name)
            return 2 * k;
    for (std::uint32_t k = 0; k < sys_vars.size(); ++k)
        if (sys_vars[k] == name)
            return 2 * static_cast<std::uint32_t>(env_vars.size() + k);
    throw std::invalid_argument("unknown kernel variable '" + name + "'");
}

SymbolicController synthesize_symbolic(const Game& g, const SynthesisMemo& memo,
                                       const lowering::KernelSpec& kernel) {
    auto& m = *g.manager;
    const std::size_t jn = g.js.size();
    SymbolicController c;
    c.manager = g.manager;
    c.env_vars = g.env_vars;
    c.sys_vars = g.sys_vars;
    c.variables = kernel.variables;
    c.memory_bits = bits_for(jn);
    c.env_init = g.theta_e;
    c.env_trans = g.rho_e;
    for (const auto& a : g.assumptions) {
        AssumptionInfo info;
        info.name = a.source.name.empty()
                        ? "assumption at " + std::to_string(a.source.span.line) + ":" +
                              std::to_string(a.source.span.column)
                        : a.source.name;
        info.kind = a.source.kind;
        info.line = a.source.span.line;
        info.column = a.source.span.column;
        info.bdd = a.bdd;
        c.assumptions.push_back(std::move(info));
    }

    const auto mem_levels = c.m_levels();
    m.ensure_vars(g.first_free_level() + 2 * c.memory_bits);
    std::vector<std::uint32_t> mem_primed;
    for (auto l : mem_levels)
        mem_primed.push_back(l + 1);
    const Bdd mp_cube = m.cube(mem_primed);
    const Bdd out_cube = g.yp_cube & mp_cube;
    auto mem = [&](std::size_t j, bool primed) {
        std::vector<bool> bits;
        for (std::uint32_t b = 0; b < c.memory_bits; ++b)
            bits.push_back((j >> b) & 1u);
        return m.literal_cube(literals(mem_levels, bits, primed ? 1 : 0));
    };

    try {
        const Bdd& z = memo.z;
        const Bdd zp = m.rename_prime(z);
        Bdd r1 = m.bdd_false(), r2 = m.bdd_false(), r3 = m.bdd_false();
        for (std::size_t j = 0; j < jn; ++j) {
            const Bdd here = mem(j, false);
            const Bdd stay = mem(j, true);
            r1 |= here & z & g.js[j] & g.rho_s & zp & mem((j + 1) % jn, true);

            const auto& chain = memo.y[j];
            for (std::size_t k = 1; k < chain.size(); ++k)
                r2 |= here & chain[k] & !chain[k - 1] & g.rho_s & m.rename_prime(chain[k - 1]) & stay;

            for (std::size_t k = 0; k < chain.size(); ++k) {
                Bdd low = k > 0 ? chain[k - 1] : m.bdd_false();
                for (std::size_t i = 0; i < g.je.size(); ++i) {
                    const Bdd& x = memo.x[j][k][i];
                    r3 |= here & x & !low & !g.je[i] & g.rho_s & m.rename_prime(x) & stay;
                    low |= x;
                }
            }
        }
        const Bdd d1 = m.exists(r1, out_cube);
        const Bdd d2 = m.exists(r2, out_cube);
        c.trans = r1 | (r2 & !d1) | (r3 & !d1 & !d2);
        c.init = g.theta_e & g.theta_s & z & mem(0, false);
    } catch (const bdd::NodeLimitExceeded& e) {
        throw ResourceError(std::string(e.what()) + " while extracting the strategy");
    }
    return c;
}

ConcreteController enumerate_concrete(const SymbolicController& c, std::size_t max_states) {
    auto& m = *c.manager;
    const auto xl = c.x_levels(), yl = c.y_levels(), ml = c.m_levels();
    std::vector<std::uint32_t> xpl, outl;
    for (auto l : xl)
        xpl.push_back(l + 1);
    for (auto l : yl)
        outl.push_back(l + 1);
    for (auto l : ml)
        outl.push_back(l + 1);
    std::vector<std::uint32_t> state_levels = xl;
    state_levels.insert(state_levels.end(), yl.begin(), yl.end());
    state_levels.insert(state_levels.end(), ml.begin(), ml.end());
    std::vector<std::uint32_t> sys_levels = yl;
    sys_levels.insert(sys_levels.end(), ml.begin(), ml.end());

    auto too_many = [&] {
        return StateLimitExceeded("concrete controller exceeds " + std::to_string(max_states) +
                                  " states; use the symbolic controller output instead");
    };

    ConcreteController out;
    std::map<std::vector<bool>, std::uint32_t> ids;
    std::queue<std::uint32_t> work;
    auto intern = [&](std::vector<bool> s) {
        auto [it, fresh] = ids.emplace(s, static_cast<std::uint32_t>(out.states.size()));
        if (fresh) {
            if (out.states.size() >= max_states)
                throw too_many();
            out.states.push_back(std::move(s));
            out.successors.emplace_back();
            work.push(it->second);
        }
        return it->second;
    };

    for (auto& x : all_sat(m, c.env_init, xl, max_states + 1)) {
        Bdd options = m.restrict(c.init, m.literal_cube(literals(xl, x)));
        auto ym = m.sat_one(options, sys_levels);
        if (!ym)
            throw std::logic_error("controller has no initial state for a legal input");
        std::vector<bool> s = x;
        s.insert(s.end(), ym->begin(), ym->end());
        out.initial.emplace_back(x, intern(std::move(s)));
    }
    while (!work.empty()) {
        const std::uint32_t id = work.front();
        work.pop();
        const Bdd here = m.literal_cube(literals(state_levels, out.states[id]));
        const Bdd moves = m.restrict(c.trans, here);
        for (auto& x2 : all_sat(m, m.restrict(c.env_trans, here), xpl, std::size_t(-1))) {
            Bdd choice = m.restrict(moves, m.literal_cube(literals(xpl, x2)));
            auto ym = m.sat_one(choice, outl);
            if (!ym)
                throw std::logic_error("controller is not complete for the environment");
            std::vector<bool> s = x2;
            s.insert(s.end(), ym->begin(), ym->end());
            std::uint32_t next = intern(std::move(s));
            out.successors[id].emplace_back(std::move(x2), next);
        }
    }
    return out;
}

} // namespace spectra::gr1
