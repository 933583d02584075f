#include "spectra/oracle/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace spectra::oracle {

using namespace syntax;

// ------------------------------------------------------------ evaluation

namespace {

bool eval_at(const Expr& e, const Lookup& lookup, bool primed) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BoolConst>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, NameRef>) {
                return lookup(x.name, primed);
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (x.op == UnaryOp::Next)
                    return eval_at(*x.operand, lookup, true);
                if (x.op == UnaryOp::Not)
                    return !eval_at(*x.operand, lookup, primed);
                throw std::invalid_argument("not a kernel expression");
            } else if constexpr (std::is_same_v<T, Binary>) {
                bool a = eval_at(*x.lhs, lookup, primed);
                switch (x.op) {
                case BinaryOp::And: return a && eval_at(*x.rhs, lookup, primed);
                case BinaryOp::Or: return a || eval_at(*x.rhs, lookup, primed);
                case BinaryOp::Implies: return !a || eval_at(*x.rhs, lookup, primed);
                case BinaryOp::Iff:
                case BinaryOp::Eq: return a == eval_at(*x.rhs, lookup, primed);
                case BinaryOp::Neq: return a != eval_at(*x.rhs, lookup, primed);
                default: throw std::invalid_argument("not a kernel expression");
                }
            } else {
                throw std::invalid_argument("not a kernel expression");
            }
        },
        e.node);
}

} // namespace

bool eval(const Expr& e, const Lookup& lookup) { return eval_at(e, lookup, false); }

bool eval_pastltl(const Expr& f, const Trace& trace, std::size_t i) {
    // phi S psi at i: psi held at some k <= i and phi held at every j in (k, i].
    auto since = [&](auto&& holds_phi, auto&& holds_psi) {
        for (std::size_t k = i + 1; k-- > 0;) {
            if (holds_psi(k))
                return true;
            if (!holds_phi(k))
                return false;
        }
        return false;
    };
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BoolConst>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, NameRef>) {
                return trace.states.at(i).at(x.name);
            } else if constexpr (std::is_same_v<T, Unary>) {
                const Expr& a = *x.operand;
                switch (x.op) {
                case UnaryOp::Not: return !eval_pastltl(a, trace, i);
                case UnaryOp::Prev: return i > 0 && eval_pastltl(a, trace, i - 1);
                case UnaryOp::Once:
                    return since([](std::size_t) { return true; },
                                 [&](std::size_t k) { return eval_pastltl(a, trace, k); });
                case UnaryOp::Historically:
                    return !since([](std::size_t) { return true; },
                                  [&](std::size_t k) { return !eval_pastltl(a, trace, k); });
                default: throw std::invalid_argument("unsupported operator in past formula");
                }
            } else if constexpr (std::is_same_v<T, Binary>) {
                if (x.op == BinaryOp::Since)
                    return since([&](std::size_t k) { return eval_pastltl(*x.lhs, trace, k); },
                                 [&](std::size_t k) { return eval_pastltl(*x.rhs, trace, k); });
                bool a = eval_pastltl(*x.lhs, trace, i);
                bool b = eval_pastltl(*x.rhs, trace, i);
                switch (x.op) {
                case BinaryOp::And: return a && b;
                case BinaryOp::Or: return a || b;
                case BinaryOp::Implies: return !a || b;
                case BinaryOp::Iff:
                case BinaryOp::Eq: return a == b;
                case BinaryOp::Neq: return a != b;
                default: throw std::invalid_argument("unsupported operator in past formula");
                }
            } else {
                throw std::invalid_argument("unsupported node in past formula");
            }
        },
        f.node);
}

// ------------------------------------------------------------------ Bits

Bits::Bits(std::size_t n, bool value) : n_(n), w_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
}

void Bits::trim() {
    if (n_ % 64 && !w_.empty())
        w_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
}

void Bits::set(std::size_t i, bool v) {
    if (v)
        w_[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
        w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

std::uint64_t Bits::block(std::size_t offset, unsigned len) const {
    std::uint64_t r = w_[offset >> 6] >> (offset & 63);
    unsigned got = 64 - (offset & 63);
    if (got < len && (offset >> 6) + 1 < w_.size())
        r |= w_[(offset >> 6) + 1] << got;
    return len == 64 ? r : r & ((std::uint64_t{1} << len) - 1);
}

bool Bits::any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w != 0; });
}

bool Bits::all() const { return (~*this).any() == false; }

Bits Bits::operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < w_.size(); ++i)
        r.w_[i] &= o.w_[i];
    return r;
}

Bits Bits::operator|(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < w_.size(); ++i)
        r.w_[i] |= o.w_[i];
    return r;
}

Bits Bits::operator~() const {
    Bits r = *this;
    for (auto& w : r.w_)
        w = ~w;
    r.trim();
    return r;
}

// ---------------------------------------------------------- ExplicitGame

namespace {

void support(const Expr& e, bool primed, const std::map<std::string, unsigned>& index,
             unsigned n, std::vector<unsigned>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NameRef>) {
                auto it = index.find(x.name);
                if (it == index.end())
                    throw std::invalid_argument("unknown kernel variable '" + x.name + "'");
                out.push_back(primed ? n + it->second : it->second);
            } else if constexpr (std::is_same_v<T, Unary>) {
                support(*x.operand, primed || x.op == UnaryOp::Next, index, n, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                support(*x.lhs, primed, index, n, out);
                support(*x.rhs, primed, index, n, out);
            }
        },
        e.node);
}

std::uint64_t gather(std::uint64_t u, const std::vector<unsigned>& positions) {
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < positions.size(); ++k)
        r |= ((u >> positions[k]) & 1u) << k;
    return r;
}

} // namespace

ExplicitGame::ExplicitGame(const lowering::KernelSpec& kernel) {
    nx_ = static_cast<unsigned>(kernel.env_vars.size());
    ny_ = static_cast<unsigned>(kernel.sys_vars.size());
    if (nx_ + ny_ > max_bits)
        throw std::length_error("explicit game limited to " + std::to_string(max_bits) +
                                " variables, got " + std::to_string(nx_ + ny_));
    const unsigned n = nx_ + ny_;
    names_ = kernel.env_vars;
    names_.insert(names_.end(), kernel.sys_vars.begin(), kernel.sys_vars.end());
    std::map<std::string, unsigned> index;
    for (unsigned i = 0; i < n; ++i)
        index[names_[i]] = i;

    // Combined assignment u: current state in bits [0, n), x' in [n, n+nx),
    // y' in [n+nx, 2n).
    auto holds = [&](const Expr& e, std::uint64_t u) {
        return eval(e, [&](const std::string& name, bool primed) {
            return ((u >> (index.at(name) + (primed ? n : 0))) & 1u) != 0;
        });
    };

    theta_e_ = Bits(std::size_t{1} << nx_, true);
    theta_s_ = Bits(states(), true);
    for (const auto& c : kernel.assumptions) {
        if (c.kind == ConstraintKind::Ini) {
            for (std::uint32_t x = 0; x < (1u << nx_); ++x)
                if (theta_e_[x] && !holds(*c.expr, x))
                    theta_e_.set(x, false);
        } else if (c.kind == ConstraintKind::AlwEv) {
            Bits b(states());
            for (std::uint32_t s = 0; s < states(); ++s)
                b.set(s, holds(*c.expr, s));
            je_.push_back(std::move(b));
        }
    }
    for (const auto& c : kernel.guarantees) {
        if (c.kind == ConstraintKind::Ini) {
            for (std::uint32_t s = 0; s < states(); ++s)
                if (theta_s_[s] && !holds(*c.expr, s))
                    theta_s_.set(s, false);
        } else if (c.kind == ConstraintKind::AlwEv) {
            Bits b(states());
            for (std::uint32_t s = 0; s < states(); ++s)
                b.set(s, holds(*c.expr, s));
            js_.push_back(std::move(b));
        }
    }
    if (je_.empty())
        je_.push_back(Bits(states(), true));
    if (js_.empty())
        js_.push_back(Bits(states(), true));

    // Transition relations: for every value of the "fixed" positions
    // [0, split) the set of allowed values of the "free" block [split,
    // split + free_width) is the conjunction of per-constraint masks,
    // each tabulated once per assignment to that constraint's support.
    auto relation = [&](const std::vector<const lowering::KernelConstraint*>& cs, unsigned split,
                        unsigned free_width) {
        const std::size_t block = std::size_t{1} << free_width;
        Bits rel(std::size_t{1} << (split + free_width), true);
        struct Table {
            std::vector<unsigned> fixed, free;
            std::vector<Bits> masks;
        };
        std::vector<Table> tables;
        for (const auto* c : cs) {
            std::vector<unsigned> sup;
            support(*c->expr, false, index, n, sup);
            std::sort(sup.begin(), sup.end());
            sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
            Table t;
            for (unsigned p : sup) {
                if (p < split)
                    t.fixed.push_back(p);
                else if (p < split + free_width)
                    t.free.push_back(p);
                else
                    throw std::invalid_argument("transition constraint mentions a primed "
                                                "variable outside its scope");
            }
            for (std::uint64_t k = 0; k < (std::uint64_t{1} << t.fixed.size()); ++k) {
                std::uint64_t base = 0;
                for (std::size_t b = 0; b < t.fixed.size(); ++b)
                    base |= ((k >> b) & 1u) << t.fixed[b];
                std::vector<bool> sub(std::size_t{1} << t.free.size());
                for (std::uint64_t v = 0; v < sub.size(); ++v) {
                    std::uint64_t u = base;
                    for (std::size_t b = 0; b < t.free.size(); ++b)
                        u |= ((v >> b) & 1u) << t.free[b];
                    sub[v] = holds(*c->expr, u);
                }
                Bits mask(block);
                std::vector<unsigned> rel_free;
                for (unsigned p : t.free)
                    rel_free.push_back(p - split);
                for (std::uint64_t f = 0; f < block; ++f)
                    mask.set(f, sub[gather(f, rel_free)]);
                t.masks.push_back(std::move(mask));
            }
            tables.push_back(std::move(t));
        }
        // rows are laid out as (s << (split - n)) | x', matching the accessors
        for (std::uint64_t u = 0; u < (std::uint64_t{1} << split); ++u) {
            const std::uint64_t row =
                ((u & ((std::uint64_t{1} << n) - 1)) << (split - n)) | (u >> n);
            for (const auto& t : tables) {
                const Bits& m = t.masks[gather(u, t.fixed)];
                for (std::uint64_t f = 0; f < block; ++f)
                    if (!m[f])
                        rel.set((row << free_width) | f, false);
            }
        }
        return rel;
    };
    std::vector<const lowering::KernelConstraint*> env_trans, sys_trans;
    for (const auto& c : kernel.assumptions)
        if (c.kind == ConstraintKind::Trans)
            env_trans.push_back(&c);
    for (const auto& c : kernel.guarantees)
        if (c.kind == ConstraintKind::Trans)
            sys_trans.push_back(&c);
    rho_e_ = relation(env_trans, n, nx_);
    rho_s_ = relation(sys_trans, n + nx_, ny_);
}

Bits ExplicitGame::cpre(const Bits& v) const {
    Bits out(states());
    const std::size_t block = std::size_t{1} << ny_;
    for (std::uint32_t s = 0; s < states(); ++s) {
        bool ok = true;
        for (std::uint32_t x2 = 0; x2 < (1u << nx_) && ok; ++x2) {
            if (!env_trans(s, x2))
                continue;
            bool found = false;
            const std::size_t base = ((std::size_t(s) << nx_) | x2) << ny_;
            for (std::size_t y2 = 0; y2 < block && !found; ++y2)
                found = rho_s_[base + y2] && v[state(x2, static_cast<std::uint32_t>(y2))];
            ok = found;
        }
        out.set(s, ok);
    }
    return out;
}

Bits winning_region(const ExplicitGame& g) {
    const std::size_t n = g.states();
    Bits z(n, true);
    for (;;) {
        Bits next_z(n, true);
        const Bits cz = g.cpre(z);
        for (const auto& js : g.sys_justice()) {
            Bits y(n, false);
            for (;;) {
                const Bits start = (js & cz) | g.cpre(y);
                Bits next_y = start;
                for (const auto& je : g.env_justice()) {
                    Bits x(n, true);
                    for (;;) {
                        Bits next_x = start | (~je & g.cpre(x));
                        if (next_x == x)
                            break;
                        x = std::move(next_x);
                    }
                    next_y = next_y | x;
                }
                if (next_y == y)
                    break;
                y = std::move(next_y);
            }
            next_z = next_z & y;
        }
        if (next_z == z)
            return z;
        z = std::move(next_z);
    }
}

bool solve_explicit(const ExplicitGame& g) {
    const Bits z = winning_region(g);
    for (std::uint32_t x = 0; x < (1u << g.nx()); ++x) {
        if (!g.env_init(x))
            continue;
        bool found = false;
        for (std::uint32_t y = 0; y < (1u << g.ny()) && !found; ++y)
            found = g.sys_init(g.state(x, y)) && z[g.state(x, y)];
        if (!found)
            return false;
    }
    return true;
}

bool solve_explicit(const lowering::KernelSpec& kernel) { return solve_explicit(ExplicitGame(kernel)); }

// ------------------------------------------------------------- fairness

std::optional<UnfairCycle> find_unfair_cycle(const Graph& g) {
    const std::size_t n = g.succ.size();
    std::vector<bool> reach(n, false);
    std::vector<std::uint32_t> stack(g.initial.begin(), g.initial.end());
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        if (reach[v])
            continue;
        reach[v] = true;
        for (auto w : g.succ[v])
            stack.push_back(w);
    }
    for (std::size_t j = 0; j < g.sys_justice.size(); ++j) {
        std::vector<bool> keep(n);
        for (std::size_t v = 0; v < n; ++v)
            keep[v] = reach[v] && !g.sys_justice[j][v];
        // Tarjan, iterative
        std::vector<int> idx(n, -1), low(n, 0);
        std::vector<bool> on(n, false);
        std::vector<std::uint32_t> st;
        int counter = 0;
        for (std::uint32_t root = 0; root < n; ++root) {
            if (!keep[root] || idx[root] >= 0)
                continue;
            std::vector<std::pair<std::uint32_t, std::size_t>> call{{root, 0}};
            idx[root] = low[root] = counter++;
            st.push_back(root);
            on[root] = true;
            while (!call.empty()) {
                auto& [v, k] = call.back();
                if (k < g.succ[v].size()) {
                    std::uint32_t w = g.succ[v][k++];
                    if (!keep[w])
                        continue;
                    if (idx[w] < 0) {
                        idx[w] = low[w] = counter++;
                        st.push_back(w);
                        on[w] = true;
                        call.emplace_back(w, 0);
                    } else if (on[w]) {
                        low[v] = std::min(low[v], idx[w]);
                    }
                    continue;
                }
                std::uint32_t done = v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().first] = std::min(low[call.back().first], low[done]);
                if (low[done] != idx[done])
                    continue;
                std::vector<std::uint32_t> comp;
                std::uint32_t w;
                do {
                    w = st.back();
                    st.pop_back();
                    on[w] = false;
                    comp.push_back(w);
                } while (w != done);
                bool cyclic = comp.size() > 1 ||
                              std::find(g.succ[done].begin(), g.succ[done].end(), done) !=
                                  g.succ[done].end();
                if (!cyclic)
                    continue;
                bool fair = true;
                for (const auto& je : g.env_justice)
                    fair = fair && std::any_of(comp.begin(), comp.end(),
                                               [&](std::uint32_t u) { return je[u]; });
                if (fair)
                    return UnfairCycle{j, comp};
            }
        }
    }
    return std::nullopt;
}

} // namespace spectra::oracle
